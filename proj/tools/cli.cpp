#include "cli.hpp"

#include "config.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>
#include <omp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace horolab::cli {

namespace {

constexpr const char* kVersion = "horolab 0.1.0";

constexpr const char* kCsvDoc =
    "sthe-run CSV columns: t,T,Q,estimate,predicted,rel_error,count,seconds\n"
    "  t          flow time\n"
    "  T          target level at t\n"
    "  Q          e^{(d-1)t}\n"
    "  estimate   T^{d-1} times the measure of {x in A : hit}\n"
    "  predicted  analytic limit (nan when unavailable)\n"
    "  rel_error  |estimate - predicted| / predicted\n"
    "  count      windows meeting A (window estimators) or hits (sampling)\n"
    "  seconds    wall time of the job (excluded from reproducibility checks)\n"
    "farey CSV columns: q,p_1..p_{d-1},x_1..x_{d-1}\n"
    "All numbers are printed with 15 significant digits.";

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format15(v).c_str(), nullptr);
}

json vec_json(const RealVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

json mat_json(const RealMatrix& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(num(m(r, c)));
    a.push_back(row);
  }
  return a;
}

json int_mat_json(const IntegerMatrix& m) {
  json a = json::array();
  for (int r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.dim(); ++c) row.push_back(m(r, c).str());
    a.push_back(row);
  }
  return a;
}

json grenier_json(const GrenierCoords& c) {
  return json{{"x", mat_json(c.x)}, {"ys", vec_json(c.ys)}, {"height", num(c.height)}, {"kprime", mat_json(c.kprime)},
              {"in_domain", c.in_domain}};
}

json witness_json(const MembershipWitness& w) {
  json j{{"source", w.farey.source}, {"alpha_prime", vec_json(w.farey.alpha_prime)}, {"alpha_d", num(w.farey.alpha_d)},
         {"point", vec_json(w.farey.point)}, {"s", num(w.s)}, {"xt", vec_json(w.xt)}, {"multiplicity", w.multiplicity}};
  if (w.z) j["z"] = vec_json(*w.z);
  if (w.grenier) j["grenier"] = grenier_json(*w.grenier);
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

int emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty()) out << text;
  else write_text(path, text);
  return kExitOk;
}

double tolerance_for(const ExperimentConfig& c, double override_tol) { return override_tol > 0 ? override_tol : c.tolerance; }

std::string results_csv(const std::vector<ExperimentResult>& rs) {
  std::ostringstream s;
  s << "t,T,Q,estimate,predicted,rel_error,count,seconds\n";
  for (const auto& r : rs)
    s << format15(r.t) << ',' << format15(r.T) << ',' << format15(r.Q) << ',' << format15(r.estimate) << ','
      << format15(r.predicted) << ',' << format15(r.rel_error) << ',' << r.count << ',' << format15(r.seconds) << '\n';
  return s.str();
}

struct Options {
  int jobs = 0;
  // farey
  int d = 2;
  std::string Q = "1", L = "identity", lo, hi, out;
  bool closed = false, count_only = false;
  // decompose
  std::string M, reduce = "none";
  // cholesky
  std::string u;
  // membership
  std::string target_file, x, t = "0", method = "dual";
  // volumes
  std::string kind = "stable", T = "1", eps, ytilde, radius, alphas, gammas, ratio_to;
  // duplicates
  bool generic = false;
  std::string s;
  // sthe-run
  std::string config, summary, manifest;
  double tolerance = 0.0;
  std::int64_t seed = -1;
  // marklof-check
  std::string t_prime = "2";
  // disjointness-sample
  std::uint64_t samples = 10000;
};

Box box_from_flags(const Options& o, int n) {
  Box b = Box::unit(n);
  if (!o.lo.empty()) b.lo = vector_from_text(o.lo, "--lo");
  if (!o.hi.empty()) b.hi = vector_from_text(o.hi, "--hi");
  b.closed_upper = o.closed;
  if (b.lo.size() != n || b.hi.size() != n) throw ConfigError("--lo/--hi must have d-1 entries");
  return b;
}

double parse_real(const std::string& text, const std::string& what) {
  try {
    return parse_number(text).value;
  } catch (const Error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

int cmd_farey(const Options& o, std::ostream& out) {
  const int d = o.d;
  if (d < 2) throw ConfigError("--d must be at least 2");
  const double Q = parse_real(o.Q, "--Q");
  const MatrixInput L = matrix_from_text(o.L, d, "--L");
  const Box box = box_from_flags(o, d - 1);
  std::ostringstream s;
  if (o.count_only) {
    const bool plain = L.real.isIdentity(0.0) && o.lo.empty() && o.hi.empty();
    json j;
    if (plain) {
      const FareyCount c = count_farey(d, Q);
      j = json{{"d", d}, {"Q", num(Q)}, {"exact", c.exact}, {"asymptotic", num(c.asymptotic)},
               {"ratio", num(static_cast<double>(c.exact) / c.asymptotic)}};
    } else {
      j = json{{"d", d}, {"Q", num(Q)}, {"exact", count_primitive(translated_farey_region(L.real, Q, box), Exec::parallel)}};
    }
    s << j.dump(2) << '\n';
    return emit(out, o.out, s.str());
  }
  const auto pts = enumerate_translated_farey(L.real, Q, box);
  s << "q";
  for (int i = 1; i < d; ++i) s << ",p_" << i;
  for (int i = 1; i < d; ++i) s << ",x_" << i;
  s << '\n';
  for (const auto& p : pts) {
    s << p.source[static_cast<std::size_t>(d - 1)];
    for (int i = 0; i + 1 < d; ++i) s << ',' << p.source[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < d; ++i) s << ',' << format15(p.point[i]);
    s << '\n';
  }
  return emit(out, o.out, s.str());
}

int cmd_decompose(const Options& o, std::ostream& out) {
  const MatrixInput in = matrix_from_text(o.M, o.M == "identity" ? o.d : 0, "--M");
  const RealMatrix& M = in.real;
  const int d = static_cast<int>(M.rows());
  const IwasawaNAK nak = iwasawa(M);
  const HRdCoords h = hrd_coords(M);
  const double s = -std::log(h.y[d - 1]) / (d - 1);
  json j{{"n", mat_json(nak.n)}, {"a", mat_json(nak.a)}, {"k", mat_json(nak.k)}, {"y", vec_json(h.y)},
         {"prefix", parity_prefix_name(h.prefix)}, {"m_h", mat_json(h.m_h)}, {"s", num(s)}};
  GrenierCoords c;
  if (o.reduce == "none") {
    c = section_coords(h.m_h, s);
  } else if (o.reduce == "gl" || o.reduce == "sl") {
    const GrenierReduction red = grenier_reduce(h.m_h, s, o.reduce == "gl" ? ReductionGroup::gl : ReductionGroup::sl);
    c = red.coords;
    j["gamma"] = int_mat_json(red.gamma);
  } else {
    throw ConfigError("--reduce must be none, gl or sl");
  }
  j["x"] = mat_json(c.x);
  j["ys"] = vec_json(c.ys);
  j["height"] = num(c.height);
  j["kprime"] = mat_json(c.kprime);
  j["in_domain"] = c.in_domain;
  return emit(out, o.out, j.dump(2) + "\n");
}

int cmd_cholesky(const Options& o, std::ostream& out) {
  const RealVector u = vector_from_text(o.u, "--u");
  const RealMatrix B = reverse_cholesky(u);
  const RealMatrix target = RealMatrix::Identity(u.size(), u.size()) + u * u.transpose();
  const double residual = (B * B.transpose() - target).cwiseAbs().rowwise().sum().maxCoeff();
  const double recursion = max_abs(B - reverse_cholesky_recursive(u));
  const double det = B.diagonal().prod();
  json j{{"B", mat_json(B)}, {"residual", num(residual)}, {"recursion_difference", num(recursion)},
         {"det_squared", num(det * det)}, {"one_plus_norm_squared", num(1.0 + u.squaredNorm())}};
  return emit(out, o.out, j.dump(2) + "\n");
}

int cmd_membership(const Options& o, std::ostream& out) {
  const int d = o.d;
  const MatrixInput L = matrix_from_text(o.L, d, "--L");
  if (o.target_file.empty()) throw ConfigError("--target is required");
  const TargetSpec target = target_of(load_json_file(o.target_file), d);
  const RealVector x = vector_from_text(o.x, "--x");
  const double t = parse_real(o.t, "--t");
  std::optional<MembershipWitness> w;
  if (o.method == "dual") {
    w = member_dual(target, L.real, x, t);
  } else if (o.method == "direct") {
    const auto* st = std::get_if<StableSection>(&target);
    if (!st) throw ConfigError("--method direct needs a stable target");
    w = member_direct(*st, L.real, x, t);
  } else {
    throw ConfigError("--method must be dual or direct");
  }
  return emit(out, o.out, w ? witness_json(*w).dump(2) + "\n" : std::string("none\n"));
}

TargetSpec target_from_flags(const Options& o) {
  json j{{"kind", o.kind}, {"T", o.T}};
  if (!o.eps.empty()) j["eps"] = o.eps;
  if (!o.ytilde.empty()) j["ytilde"] = o.ytilde;
  if (!o.radius.empty()) j["radius"] = o.radius;
  if (!o.alphas.empty()) j["alphas"] = o.alphas;
  if (!o.gammas.empty()) j["gammas"] = o.gammas;
  if (!o.lo.empty() || !o.hi.empty()) j["B"] = json{{"lo", o.lo}, {"hi", o.hi}};
  return target_of(j, o.d);
}

int cmd_volumes(const Options& o, std::ostream& out) {
  const TargetSpec target = o.target_file.empty() ? target_from_flags(o) : target_of(load_json_file(o.target_file), o.d);
  const MeasureRecord m = measure_formula(target);
  json j{{"kind", target_kind(target)}, {"d", target_dim(target)}, {"level", num(m.level)}, {"exponent", m.exponent}};
  j["absolute"] = m.absolute ? num(*m.absolute) : json(nullptr);
  const auto dens = limit_density(target);
  j["limit_density"] = dens ? num(*dens) : json(nullptr);
  j["flowed_box_ratio"] = num(flowed_box_measure_ratio(target_dim(target), m.level));
  if (!o.ratio_to.empty()) j["ratio_to"] = num(m.ratio_to(parse_real(o.ratio_to, "--ratio-to")));
  if (!m.note.empty()) j["note"] = m.note;
  return emit(out, o.out, j.dump(2) + "\n");
}

int cmd_duplicates(const Options& o, std::ostream& out) {
  const MatrixInput L = matrix_from_text(o.L, o.L == "identity" ? o.d : 0, "--L");
  const DuplicateRegion r = duplicate_region(L.real, o.generic);
  json j{{"kind", r.kind == DuplicateRegion::Kind::all ? "all" : "torus"}};
  if (r.kind == DuplicateRegion::Kind::torus) j["period_basis"] = mat_json(r.period_basis);
  if (!o.s.empty()) {
    const int n = static_cast<int>(L.real.rows()) - 1;
    const auto parts = vector_from_text(o.s, "--s");
    if (parts.size() != n) throw ConfigError("--s must have d-1 entries");
    bool dup;
    if (L.exact) {
      std::vector<Rational> sx;
      std::istringstream in(o.s);
      std::string tok;
      bool exact = true;
      while (std::getline(in, tok, ',')) {
        const ParsedNumber p = parse_number(tok);
        if (!p.exact) exact = false;
        else sx.push_back(*p.exact);
      }
      dup = exact ? is_gamma_duplicate(*L.exact, sx) : is_gamma_duplicate(L.real, parts);
      j["exact"] = exact;
    } else {
      dup = is_gamma_duplicate(L.real, parts);
      j["exact"] = false;
    }
    j["duplicate"] = dup;
  }
  return emit(out, o.out, j.dump(2) + "\n");
}

int cmd_sthe_run(const Options& o, std::ostream& out) {
  if (o.config.empty()) throw ConfigError("--config is required");
  json doc = load_json_file(o.config);
  if (doc.is_object() && doc.contains("command") && doc.contains("config")) {
    if (doc.at("command") != "sthe-run") throw ConfigError("manifest is for another command");
    doc = doc.at("config");
  }
  if (o.seed >= 0) doc["seed"] = o.seed;
  ExperimentConfig cfg = experiment_of(doc);
  const auto results = sthe_run(cfg);
  const double tol = tolerance_for(cfg, o.tolerance);
  const ConvergenceSummary sum = convergence_report(results, tol);

  const std::string csv = results_csv(results);
  emit(out, o.out, csv);
  json summary{{"command", "sthe-run"},
               {"target", target_kind(cfg.target)},
               {"estimator", estimator_name(cfg.estimator)},
               {"seed", cfg.seed},
               {"tolerance", num(tol)},
               {"slope", num(sum.slope)},
               {"final_rel_error", num(sum.final_rel_error)},
               {"pass", sum.pass},
               {"degenerate", sum.degenerate}};
  json rows = json::array();
  for (const auto& r : results)
    rows.push_back(json{{"t", num(r.t)}, {"T", num(r.T)}, {"Q", num(r.Q)}, {"estimate", num(r.estimate)},
                        {"predicted", num(r.predicted)}, {"abs_error", num(r.abs_error)}, {"rel_error", num(r.rel_error)},
                        {"count", r.count}, {"overlaps", r.overlaps}});
  summary["results"] = rows;
  if (!o.summary.empty()) write_text(o.summary, summary.dump(2) + "\n");
  if (!o.manifest.empty()) {
    json outputs = json::array(), sums = json::object();
    for (const auto& p : {o.out, o.summary})
      if (!p.empty()) {
        outputs.push_back(p);
        sums[p] = sha256_file(p);
      }
    json man{{"version", kVersion}, {"command", "sthe-run"}, {"config", doc}, {"seed", cfg.seed},
             {"outputs", outputs}, {"sha256", sums}};
    write_text(o.manifest, man.dump(2) + "\n");
  }
  return sum.pass ? kExitOk : kExitCheckFailed;
}

int cmd_marklof(const Options& o, std::ostream& out) {
  const int d = o.d;
  const double Q = parse_real(o.Q, "--Q");
  const double tp = parse_real(o.t_prime, "--T-prime");
  if (!(tp >= 1.0)) throw ConfigError("--T-prime must be at least 1");
  const MatrixInput L = matrix_from_text(o.L, d, "--L");
  const Box ref = box_from_flags(o, d - 1);
  MarklofObservable obs;
  obs.s_lo = std::log(tp) / d;
  const MarklofResult r = marklof_average(d, L.real, Q, obs, ref);
  const double tol = o.tolerance > 0 ? o.tolerance : (d == 2 ? 0.005 : 0.03);
  const double rel = std::abs(r.empirical - r.predicted) / r.predicted;
  const bool pass = rel <= tol;
  json j{{"d", d}, {"Q", num(Q)}, {"T_prime", num(tp)}, {"empirical", num(r.empirical)}, {"predicted", num(r.predicted)},
         {"rel_error", num(rel)}, {"hits", r.hits}, {"total", r.total}, {"tolerance", num(tol)}, {"pass", pass}};
  emit(out, o.out, j.dump(2) + "\n");
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_disjointness(const Options& o, std::ostream& out) {
  const DisjointnessReport r = disjointness_property_sample(o.d, o.samples, o.seed < 0 ? 0 : static_cast<std::uint64_t>(o.seed));
  json j{{"d", r.d}, {"samples", r.samples}, {"rejected", r.rejected}, {"violations", r.violations},
         {"min_norm", num(r.min_norm)}, {"bound", num(r.bound)}, {"pass", r.violations == 0}};
  emit(out, o.out, j.dump(2) + "\n");
  return r.violations == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace

std::string format15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"horolab: Farey lattices, section coordinates and shrinking-target experiments", "horolab"};
  app.footer(kCsvDoc);
  app.require_subcommand(1);
  Options o;
  app.add_option("--jobs", o.jobs, "worker threads (0 = runtime default); output does not depend on it")->check(CLI::NonNegativeNumber);

  auto out_opt = [&](CLI::App* sub) { sub->add_option("--out", o.out, "output file (default: stdout)"); };
  auto box_opts = [&](CLI::App* sub, const char* what) {
    sub->add_option("--lo", o.lo, std::string("lower corner of the ") + what + ", comma separated");
    sub->add_option("--hi", o.hi, std::string("upper corner of the ") + what + ", comma separated");
  };

  auto* farey = app.add_subcommand("farey", "list (translated) Farey points as CSV q,p_1..,x_1..");
  farey->add_option("--d", o.d, "ambient dimension d >= 2")->required();
  farey->add_option("--Q", o.Q, "denominator bound Q >= 1 (literal, e.g. 100 or 1e4)")->required();
  farey->add_option("--L", o.L, "lattice L: identity, a JSON file, or rows 'a,b;c,d'");
  box_opts(farey, "point box (default [0,1)^{d-1})");
  farey->add_flag("--closed", o.closed, "treat the box's upper faces as closed");
  farey->add_flag("--count", o.count_only, "print counts (exact and asymptotic) instead of points");
  out_opt(farey);

  auto* dec = app.add_subcommand("decompose", "Iwasawa, (H,R^d) and section coordinates as JSON");
  dec->add_option("--M", o.M, "unimodular matrix: JSON file or rows 'a,b;c,d'")->required();
  dec->add_option("--d", o.d, "dimension for --M identity");
  dec->add_option("--reduce", o.reduce, "Grenier reduction: none, gl or sl (d in {2,3})");
  out_opt(dec);

  auto* chol = app.add_subcommand("cholesky", "upper triangular B with B tB = I + u tu, with residuals");
  chol->add_option("--u", o.u, "vector u, comma separated")->required();
  out_opt(chol);

  auto* mem = app.add_subcommand("membership", "witness JSON for L n_-(x) Phi^t hitting a target, or 'none'");
  mem->add_option("--d", o.d, "ambient dimension")->required();
  mem->add_option("--L", o.L, "lattice L: identity, a JSON file, or rows");
  mem->add_option("--target", o.target_file, "target spec JSON file")->required();
  mem->add_option("--x", o.x, "horosphere parameter x, comma separated")->required();
  mem->add_option("--t", o.t, "flow time t >= 0")->required();
  mem->add_option("--method", o.method, "dual (Farey proximity) or direct (lattice slab, stable only)");
  out_opt(mem);

  auto* vol = app.add_subcommand("volumes", "closed-form Haar measures and scaling ratios as JSON");
  vol->add_option("--target", o.kind, "stable, spherical, grenier-stable or grenier-spherical");
  vol->add_option("--spec", o.target_file, "target spec JSON file (overrides the flags below)");
  vol->add_option("--d", o.d, "ambient dimension");
  vol->add_option("--T", o.T, "target level T");
  vol->add_option("--eps", o.eps, "side of the epsilon box");
  vol->add_option("--ytilde", o.ytilde, "centre of the epsilon box");
  vol->add_option("--radius", o.radius, "chart radius (< pi/2)");
  vol->add_option("--alphas", o.alphas, "Grenier lower height bounds");
  vol->add_option("--gammas", o.gammas, "Grenier upper height bounds");
  vol->add_option("--ratio-to", o.ratio_to, "also print mu(T)/mu(T') for this T'");
  box_opts(vol, "stable box B");
  out_opt(vol);

  auto* dup = app.add_subcommand("duplicates", "duplicate-free parameter region of L, and optional duplicate test");
  dup->add_option("--L", o.L, "lattice L: identity (with --d), a JSON file, or rows")->required();
  dup->add_option("--d", o.d, "dimension for --L identity");
  dup->add_flag("--generic", o.generic, "assert L is Haar-generic");
  dup->add_option("--s", o.s, "shift s to test, comma separated");
  out_opt(dup);

  auto* sr = app.add_subcommand("sthe-run", "evaluate T^{d-1} int_A 1_target over a t schedule; CSV + JSON summary");
  sr->add_option("--config", o.config, "experiment config JSON (or a manifest written by --manifest)")->required();
  sr->add_option("--summary", o.summary, "JSON summary file");
  sr->add_option("--manifest", o.manifest, "write a manifest (config, seed, outputs, sha256)");
  sr->add_option("--tolerance", o.tolerance, "relative tolerance for the final t (overrides config)");
  sr->add_option("--seed", o.seed, "seed override");
  out_opt(sr);

  auto* mk = app.add_subcommand("marklof-check", "fraction of Farey points with depth s >= log(T')/d vs T'^{-(d-1)}");
  mk->add_option("--d", o.d, "ambient dimension")->required();
  mk->add_option("--Q", o.Q, "denominator bound")->required();
  mk->add_option("--T-prime", o.t_prime, "level T' >= 1 (default 2)");
  mk->add_option("--L", o.L, "lattice L");
  mk->add_option("--tolerance", o.tolerance, "relative tolerance (default 0.005 for d=2, 0.03 otherwise)");
  box_opts(mk, "reference box (default [0,1)^{d-1})");
  out_opt(mk);

  auto* dj = app.add_subcommand("disjointness-sample", "sample reduced height-1 elements and check the separation bound");
  dj->add_option("--d", o.d, "2 or 3")->required();
  dj->add_option("--n", o.samples, "accepted samples (default 10000)");
  dj->add_option("--seed", o.seed, "seed (default 0)");
  out_opt(dj);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    load_tolerance_from_env();
  } catch (const Error& e) {
    err << "error: HOROLAB_TOLERANCE: " << e.what() << '\n';
    return kExitUsage;
  }
  if (o.jobs > 0) omp_set_num_threads(o.jobs);

  try {
    if (*farey) return cmd_farey(o, out);
    if (*dec) return cmd_decompose(o, out);
    if (*chol) return cmd_cholesky(o, out);
    if (*mem) return cmd_membership(o, out);
    if (*vol) return cmd_volumes(o, out);
    if (*dup) return cmd_duplicates(o, out);
    if (*sr) return cmd_sthe_run(o, out);
    if (*mk) return cmd_marklof(o, out);
    if (*dj) return cmd_disjointness(o, out);
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "usage error: malformed config: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
    return e.code() == Errc::invalid_argument || e.code() == Errc::invalid_dimension ? kExitUsage : kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace horolab::cli
