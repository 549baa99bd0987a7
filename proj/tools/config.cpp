#include "config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace horolab::cli {

namespace {

[[noreturn]] void bad(const std::string& what, const std::string& why) { throw ConfigError(what + ": " + why); }

const json& field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) bad(what, std::string("missing key '") + key + "'");
  return j.at(key);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

ParsedNumber number_of(const json& j, const std::string& what) {
  try {
    if (j.is_number_integer()) return ParsedNumber{j.get<double>(), Rational(j.get<std::int64_t>())};
    if (j.is_number()) return ParsedNumber{j.get<double>(), std::nullopt};
    if (j.is_string()) return parse_number(j.get<std::string>());
  } catch (const Error& e) {
    bad(what, e.what());
  }
  bad(what, "expected a number or a numeric string");
}

double real_of(const json& j, const std::string& what) { return number_of(j, what).value; }

RealVector vector_of(const json& j, const std::string& what) {
  if (j.is_string()) return vector_from_text(j.get<std::string>(), what);
  if (!j.is_array()) bad(what, "expected an array");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = real_of(j[i], what);
  return v;
}

RealVector vector_from_text(const std::string& text, const std::string& what) {
  const auto parts = split(text, ',');
  if (parts.empty()) bad(what, "empty list");
  RealVector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    try {
      v[static_cast<Eigen::Index>(i)] = parse_number(parts[i]).value;
    } catch (const Error& e) {
      bad(what, e.what());
    }
  }
  return v;
}

MatrixInput matrix_of(const json& j, int d, const std::string& what) {
  MatrixInput m;
  if (j.is_string() && j.get<std::string>() == "identity") {
    if (d < 2) bad(what, "identity needs a dimension");
    m.real = RealMatrix::Identity(d, d);
    m.exact = RationalMatrix(static_cast<std::size_t>(d), std::vector<Rational>(static_cast<std::size_t>(d), Rational(0)));
    for (int i = 0; i < d; ++i) (*m.exact)[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    return m;
  }
  if (!j.is_array() || j.empty()) bad(what, "expected \"identity\" or an array of rows");
  const auto n = static_cast<int>(j.size());
  if (d > 0 && n != d) bad(what, "expected " + std::to_string(d) + " rows");
  m.real.resize(n, n);
  RationalMatrix exact(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
  bool all_exact = true;
  for (int r = 0; r < n; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) bad(what, "matrix must be square");
    for (int c = 0; c < n; ++c) {
      const ParsedNumber p = number_of(row[static_cast<std::size_t>(c)], what);
      m.real(r, c) = p.value;
      if (p.exact) exact[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = *p.exact;
      else all_exact = false;
    }
  }
  if (all_exact) m.exact = std::move(exact);
  return m;
}

MatrixInput matrix_from_text(const std::string& text, int d, const std::string& what) {
  if (text == "identity") return matrix_of(json(text), d, what);
  if (std::filesystem::is_regular_file(text)) {
    const json j = load_json_file(text);
    return matrix_of(j.is_object() && j.contains("L") ? j.at("L") : j, d, what);
  }
  json rows = json::array();
  for (const auto& r : split(text, ';')) {
    json row = json::array();
    for (const auto& c : split(r, ',')) row.push_back(c);
    rows.push_back(row);
  }
  return matrix_of(rows, d, what);
}

Box box_of(const json& j, int n, const std::string& what) {
  Box b;
  b.lo = vector_of(field(j, "lo", what), what + ".lo");
  b.hi = vector_of(field(j, "hi", what), what + ".hi");
  b.closed_upper = j.value("closed_upper", false);
  if (b.dim() != n || b.hi.size() != n) bad(what, "box must have dimension " + std::to_string(n));
  try {
    b.validate();
  } catch (const Error& e) {
    bad(what, e.what());
  }
  return b;
}

namespace {

GrenierBox grenier_box_of(const json& j, int d) {
  const RealVector alphas = vector_of(field(j, "alphas", "target"), "target.alphas");
  const RealVector gammas = vector_of(field(j, "gammas", "target"), "target.gammas");
  if (alphas.size() != d - 1) bad("target.alphas", "expected d-1 entries");
  GrenierBox box = GrenierBox::with_heights(alphas, gammas);
  auto bounds = [&](const char* key, RealMatrix& out) {
    if (!j.contains(key)) return;
    const MatrixInput m = matrix_of(j.at(key), d, std::string("target.") + key);
    out = m.real;
  };
  bounds("beta_lo", box.beta_lo);
  bounds("beta_hi", box.beta_hi);
  if (j.contains("ktilde")) {
    const json& k = j.at("ktilde");
    box.ktilde.all = false;
    box.ktilde.angle_lo = real_of(field(k, "lo", "target.ktilde"), "target.ktilde.lo");
    box.ktilde.angle_hi = real_of(field(k, "hi", "target.ktilde"), "target.ktilde.hi");
  }
  return box;
}

Box stable_box_of(const json& j, int d) {
  if (j.contains("B")) return box_of(j.at("B"), d - 1, "target.B");
  const double eps = real_of(field(j, "eps", "target"), "target.eps");
  RealVector yt = RealVector::Zero(d - 1);
  if (j.contains("ytilde")) yt = vector_of(j.at("ytilde"), "target.ytilde");
  if (yt.size() != d - 1) bad("target.ytilde", "expected d-1 entries");
  return StableSection::epsilon_box(1.0, eps, yt).B;
}

}  // namespace

TargetSpec target_of(const json& j, int d) {
  if (d < 2) bad("target", "d must be at least 2");
  const std::string kind = field(j, "kind", "target").get<std::string>();
  const double T = j.contains("T") ? real_of(j.at("T"), "target.T") : 1.0;
  auto chart = [&]() {
    Chart c;
    c.dim = d;
    c.radius = real_of(field(j, "radius", "target"), "target.radius");
    return c;
  };
  if (kind == "stable") return StableSection{T, stable_box_of(j, d)};
  if (kind == "spherical") return SphericalSection{T, chart()};
  if (kind == "grenier-stable") return GrenierBoxStable{grenier_box_of(j, d), T, stable_box_of(j, d)};
  if (kind == "grenier-spherical") return GrenierBoxSpherical{grenier_box_of(j, d), T, chart()};
  bad("target.kind", "unknown kind '" + kind + "'");
}

ExperimentConfig experiment_of(const json& j) {
  if (!j.is_object()) bad("config", "expected an object");
  static const std::vector<std::string> known = {"d", "L", "generic", "A", "target", "t_schedule", "T_rule",
                                                  "estimator", "samples", "seed", "tolerance", "strict"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) bad("config", "unknown key '" + key + "'");
  ExperimentConfig c;
  c.d = field(j, "d", "config").get<int>();
  const MatrixInput L = matrix_of(j.value("L", json("identity")), c.d, "config.L");
  c.L = L.real;
  c.L_exact = L.exact;
  c.generic = j.value("generic", false);
  const json& a = field(j, "A", "config");
  if (a.contains("radius")) {
    c.A = ParamRegion::ball(vector_of(field(a, "center", "config.A"), "config.A.center"), real_of(a.at("radius"), "config.A.radius"));
    if (c.A.dim() != c.d - 1) bad("config.A", "center must have d-1 entries");
  } else {
    c.A = ParamRegion::from_box(box_of(a, c.d - 1, "config.A"));
  }
  c.target = target_of(field(j, "target", "config"), c.d);
  if (j.contains("t_schedule")) {
    const RealVector ts = vector_of(j.at("t_schedule"), "config.t_schedule");
    c.t_schedule.assign(ts.data(), ts.data() + ts.size());
  } else {
    c.t_schedule = default_schedule(c.d);
  }
  c.T_rule.T0 = target_level(c.target);
  if (j.contains("T_rule")) {
    const json& r = j.at("T_rule");
    const std::string kind = field(r, "kind", "config.T_rule").get<std::string>();
    if (kind == "growing") {
      c.T_rule.growing = true;
      c.T_rule.eta = real_of(field(r, "eta", "config.T_rule"), "config.T_rule.eta");
    } else if (kind != "constant") {
      bad("config.T_rule.kind", "expected constant or growing");
    }
    if (r.contains("T0")) c.T_rule.T0 = real_of(r.at("T0"), "config.T_rule.T0");
  }
  try {
    c.estimator = j.contains("estimator") ? parse_estimator(j.at("estimator").get<std::string>()) : default_estimator(c.target);
  } catch (const Error& e) {
    bad("config.estimator", e.what());
  }
  c.samples = j.value("samples", std::uint64_t{0});
  c.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("tolerance")) c.tolerance = real_of(j.at("tolerance"), "config.tolerance");
  c.strict_disjointness = j.value("strict", false);
  try {
    c.validate();
  } catch (const Error& e) {
    bad("config", e.what());
  }
  return c;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace horolab::cli
