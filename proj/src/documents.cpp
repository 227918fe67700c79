#include "nnapprox/documents.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "nnapprox/errors.hpp"

namespace nnapprox {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("field '") + key + "': " + e.what());
  }
}

double endpoint(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw InvalidArgument("interval endpoints must be numbers or \"-inf\"/\"inf\"");
}

json endpoint_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

void expect_dim(std::size_t dim, std::size_t got, const char* what) {
  if (dim != got) throw InvalidArgument(std::string(what) + " has length " + std::to_string(got) +
                                        " but dim is " + std::to_string(dim));
}

json halfspace_json(const Halfspace& h) { return json{{"w", h.w}, {"theta", h.theta}}; }

json params_json(const ConstructionParams& p) {
  return json{{"epsilon", p.epsilon},
              {"gamma", p.gamma},
              {"rho", p.rho},
              {"t", p.t},
              {"method", to_string(p.method)},
              {"sample_budget", p.sample_budget},
              {"seed", p.seed},
              {"estimation_budget_fraction", p.estimation_budget_fraction}};
}

ConstructionParams params_from(const json& j) {
  ConstructionParams p;
  p.epsilon = required<double>(j, "epsilon");
  p.gamma = required<double>(j, "gamma");
  p.rho = required<double>(j, "rho");
  p.t = required<std::uint64_t>(j, "t");
  p.method = parse_coefficient_method(required<std::string>(j, "method"));
  p.sample_budget = required<std::uint64_t>(j, "sample_budget");
  p.seed = required<std::uint64_t>(j, "seed");
  p.estimation_budget_fraction = required<double>(j, "estimation_budget_fraction");
  return p;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json diagnostics_json(const Diagnostics& d) {
  return json{{"gamma_source", d.gamma_source},
              {"gamma_std_error", d.gamma_std_error},
              {"coefficient_count", d.coefficient_count},
              {"coefficient_samples", d.coefficient_samples},
              {"estimation_l2_bound", optional_json(d.estimation_l2_bound)},
              {"estimation_l2_observed", optional_json(d.estimation_l2_observed)},
              {"truncation_tail_bound", d.truncation_tail_bound},
              {"smoothing_bound", d.smoothing_bound},
              {"tail_l2_mass", optional_json(d.tail_l2_mass)},
              {"t_overridden", d.t_overridden}};
}

Diagnostics diagnostics_from(const json& j) {
  Diagnostics d;
  d.gamma_source = j.value("gamma_source", "");
  d.gamma_std_error = j.value("gamma_std_error", 0.0);
  d.coefficient_count = j.value("coefficient_count", std::uint64_t{0});
  d.coefficient_samples = j.value("coefficient_samples", std::uint64_t{0});
  d.estimation_l2_bound = optional_from(j, "estimation_l2_bound");
  d.estimation_l2_observed = optional_from(j, "estimation_l2_observed");
  d.truncation_tail_bound = j.value("truncation_tail_bound", 0.0);
  d.smoothing_bound = j.value("smoothing_bound", 0.0);
  d.tail_l2_mass = optional_from(j, "tail_l2_mass");
  d.t_overridden = j.value("t_overridden", false);
  return d;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ConceptSet parse_set_spec(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw InvalidArgument("set spec must be a JSON object");
  const auto kind = required<std::string>(j, "kind");
  const auto dim = required<std::size_t>(j, "dim");
  if (dim == 0) throw InvalidArgument("dim must be positive");

  auto parse_halfspace = [dim](const json& h) {
    Halfspace hs{required<std::vector<double>>(h, "w"), required<double>(h, "theta")};
    expect_dim(dim, hs.w.size(), "w");
    return hs;
  };

  std::optional<ConceptSet> set;
  if (kind == "halfspace") {
    Halfspace h = parse_halfspace(j);
    set = ConceptSet::halfspace(std::move(h.w), h.theta);
  } else if (kind == "intersection") {
    std::vector<Halfspace> hs;
    for (const auto& h : required<json>(j, "halfspaces")) hs.push_back(parse_halfspace(h));
    set = ConceptSet::intersection(dim, std::move(hs));
  } else if (kind == "ball") {
    auto center = required<std::vector<double>>(j, "center");
    expect_dim(dim, center.size(), "center");
    set = ConceptSet::ball(std::move(center), required<double>(j, "radius"));
  } else if (kind == "interval_union") {
    if (dim != 1) throw InvalidArgument("interval_union requires dim = 1");
    std::vector<Interval> ivs;
    for (const auto& iv : required<json>(j, "intervals")) {
      if (!iv.is_array() || iv.size() != 2) throw InvalidArgument("each interval must be [lo, hi]");
      ivs.push_back(Interval{endpoint(iv[0]), endpoint(iv[1])});
    }
    set = ConceptSet::interval_union(std::move(ivs));
  } else if (kind == "full") {
    set = ConceptSet::full(dim);
  } else if (kind == "empty") {
    set = ConceptSet::empty(dim);
  } else {
    throw InvalidArgument("unknown set kind '" + kind + "'");
  }
  if (!j.value("signed_distance", true)) set = set->without_signed_distance();
  return *set;
}

ConceptSet load_set_spec(const std::filesystem::path& path) { return parse_set_spec(read_file(path)); }

std::string serialize_set_spec(const ConceptSet& s) {
  json j{{"kind", s.kind_name()}, {"dim", s.dim()}};
  const auto& kind = s.kind();
  if (const auto* h = std::get_if<Halfspace>(&kind)) {
    j["w"] = h->w;
    j["theta"] = h->theta;
  } else if (const auto* in = std::get_if<Intersection>(&kind)) {
    j["halfspaces"] = json::array();
    for (const auto& h : in->halfspaces) j["halfspaces"].push_back(halfspace_json(h));
  } else if (const auto* b = std::get_if<Ball>(&kind)) {
    j["center"] = b->center;
    j["radius"] = b->radius;
  } else if (const auto* u = std::get_if<IntervalUnion>(&kind)) {
    j["intervals"] = json::array();
    for (const auto& iv : u->intervals) j["intervals"].push_back(json::array({endpoint_json(iv.lo), endpoint_json(iv.hi)}));
  } else if (std::holds_alternative<OracleSet>(kind)) {
    throw InvalidArgument("oracle sets cannot be serialized");
  }
  if (!s.has_signed_distance()) j["signed_distance"] = false;
  return j.dump(2);
}

PolynomialDocument make_document(const NonNegApprox& approx, bool squared_affine) {
  PolynomialDocument doc;
  if (squared_affine) {
    doc.form = approx.q_form;
  } else {
    if (!approx.q_expansion) throw BudgetExceeded("q expansion was not built (coefficient cap)");
    doc.form = *approx.q_expansion_form();
  }
  doc.params = approx.params;
  doc.diagnostics = approx.diagnostics;
  return doc;
}

std::string serialize(const PolynomialDocument& doc) {
  json j;
  j["format_version"] = doc.format_version;
  j["dim"] = doc.dim();
  j["basis"] = kBasisTag;
  j["representation"] =
      doc.form.representation == EvalForm::Representation::squared_affine ? "squared_affine" : "expansion";
  if (doc.form.direction) j["projection"] = *doc.form.direction;
  json terms = json::array();
  for (const auto& [alpha, c] : doc.form.poly.terms()) terms.push_back(json{{"alpha", alpha.exponents()}, {"coeff", c}});
  j["terms"] = std::move(terms);
  if (doc.params) j["params"] = params_json(*doc.params);
  if (doc.diagnostics) j["diagnostics"] = diagnostics_json(*doc.diagnostics);
  return j.dump(2) + "\n";
}

PolynomialDocument parse_polynomial_document(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw InvalidArgument("polynomial document must be a JSON object");
  const int version = required<int>(j, "format_version");
  if (version != kPolynomialFormatVersion) {
    throw InvalidArgument("unsupported format_version " + std::to_string(version));
  }
  if (required<std::string>(j, "basis") != kBasisTag) throw InvalidArgument("unsupported basis tag");
  const auto dim = required<std::size_t>(j, "dim");
  if (dim == 0) throw InvalidArgument("dim must be positive");

  PolynomialDocument doc;
  const auto rep = required<std::string>(j, "representation");
  if (rep == "squared_affine") doc.form.representation = EvalForm::Representation::squared_affine;
  else if (rep == "expansion") doc.form.representation = EvalForm::Representation::expansion;
  else throw InvalidArgument("unknown representation '" + rep + "'");

  std::size_t poly_dim = dim;
  if (j.contains("projection")) {
    auto w = required<std::vector<double>>(j, "projection");
    expect_dim(dim, w.size(), "projection");
    doc.form.direction = std::move(w);
    poly_dim = 1;
  }
  HermiteExpansion poly(poly_dim);
  for (const auto& term : required<json>(j, "terms")) {
    auto alpha = required<std::vector<std::uint32_t>>(term, "alpha");
    expect_dim(poly_dim, alpha.size(), "alpha");
    MultiIndex idx(std::move(alpha));
    if (poly.coefficient(idx) != 0.0) throw InvalidArgument("duplicate multi-index in terms");
    poly.add(idx, required<double>(term, "coeff"));
  }
  doc.form.poly = std::move(poly);
  if (j.contains("params") && !j.at("params").is_null()) doc.params = params_from(j.at("params"));
  if (j.contains("diagnostics") && !j.at("diagnostics").is_null()) doc.diagnostics = diagnostics_from(j.at("diagnostics"));
  return doc;
}

PolynomialDocument load_polynomial_document(const std::filesystem::path& path) {
  return parse_polynomial_document(read_file(path));
}

void save_polynomial_document(const PolynomialDocument& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << serialize(doc);
}

const std::vector<std::string_view> kExperimentColumns = {
    "set", "epsilon", "gamma", "rho", "t_formula", "t_empirical", "deg_q", "l1_mean", "l1_std_error",
    "n", "seed", "gamma_source", "method", "coeff_samples", "l1_upper"};

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_header() {
  std::string s;
  for (std::size_t i = 0; i < kExperimentColumns.size(); ++i) {
    if (i) s += ',';
    s += kExperimentColumns[i];
  }
  return s + "\n";
}

std::string csv_line(const ExperimentRow& r) {
  std::ostringstream ss;
  ss << r.set << ',' << format_double(r.epsilon) << ',' << format_double(r.gamma) << ',' << format_double(r.rho)
     << ',' << r.t_formula << ',' << (r.t_empirical ? std::to_string(*r.t_empirical) : std::string()) << ','
     << r.deg_q << ',' << format_double(r.l1_mean) << ',' << format_double(r.l1_std_error) << ',' << r.n << ','
     << r.seed << ',' << r.gamma_source << ',' << r.method << ',' << r.coeff_samples << ','
     << format_double(r.l1_upper) << '\n';
  return ss.str();
}

}  // namespace nnapprox
