// pfbell: finite-part quadrature, singular-density moment checks, epsilon
// sweeps, CHSH audit and the absolute-value paradox report.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pfbell/bell_audit.hpp"
#include "pfbell/fp_quadrature.hpp"
#include "pfbell/json_io.hpp"
#include "pfbell/kernels/kernels.hpp"
#include "pfbell/lhv_model.hpp"
#include "pfbell/mc_engine.hpp"
#include "pfbell/prob_space.hpp"

namespace {

using nlohmann::json;
using namespace pfbell;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadConfig = 2;

struct CommonOpts {
  std::string out;
  bool deterministic = false;
  bool strict = false;
  std::string kernel = "auto";
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "write the report to this path instead of stdout");
  cmd->add_flag("--deterministic", c.deterministic,
                "omit timestamp/host fields so identical runs emit identical bytes");
  cmd->add_flag("--strict", c.strict,
                "reject vectors whose norm deviates from 1 by more than 1e-6");
  cmd->add_option("--kernel", c.kernel, "kernel selection: auto|scalar|avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

void apply_kernel(const CommonOpts& c) {
  std::string sel = c.kernel;
  if (sel == "auto") {
    if (const char* env = std::getenv("PFBELL_KERNEL")) sel = env;
  }
  kernels::force_kernels(sel);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PFBELL_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 0;
}

std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad number: " + item);
    out.push_back(v);
  }
  return out;
}

lhv::UnitVector3 parse_vector(const std::string& text, bool strict) {
  std::vector<double> v = parse_csv_doubles(text);
  if (v.size() != 3)
    throw std::invalid_argument("vector needs exactly three components: " + text);
  double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (strict && std::abs(norm - 1.0) > 1e-6)
    throw std::invalid_argument("vector norm deviates from 1 beyond 1e-6: " + text);
  return lhv::UnitVector3::normalized(v[0], v[1], v[2]);
}

lhv::ModelConstants parse_constants(const std::string& text) {
  lhv::ModelConstants k = lhv::ModelConstants::canonical();
  if (text.empty()) return k;
  std::optional<double> c_over, beta_over, f_over;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("constants need key=value pairs: " + item);
    std::string key = item.substr(0, eq);
    double val = std::stod(item.substr(eq + 1));
    if (key == "C" || key == "c") c_over = val;
    else if (key == "beta") beta_over = val;
    else if (key == "f") f_over = val;
    else throw std::invalid_argument("unknown constant: " + key);
  }
  if (c_over) k = lhv::ModelConstants::from_c(*c_over);
  if (beta_over) k.beta = *beta_over;
  if (f_over) k.f = *f_over;
  return k;
}

mc::EpsilonGrid parse_grid(const std::string& text) {
  // start:end:count, expanded logarithmically
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3)
    throw std::invalid_argument("grid syntax is start:end:count, e.g. 1e-2:1e-6:8");
  return mc::EpsilonGrid::log_spaced(std::stod(parts[0]), std::stod(parts[1]),
                                     std::stoi(parts[2]));
}

json env_block() {
  json j;
  std::time_t now = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["generated_at"] = buf;
  j["kernel"] = kernels::active_kernel_name();
  return j;
}

int emit(const json& j, const CommonOpts& c) {
  std::string text = j.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      std::cerr << "cannot open output path: " << c.out << "\n";
      return kExitBadConfig;
    }
    f << text;
  }
  return kExitOk;
}

int emit_text(const std::string& text, const CommonOpts& c) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      std::cerr << "cannot open output path: " << c.out << "\n";
      return kExitBadConfig;
    }
    f << text;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- verify ---
struct Check {
  std::string name;
  double value;
  double expected;
  double tolerance;
  bool pass;
};

int cmd_verify(const CommonOpts& c, const std::string& a_arg, const std::string& b_arg,
               const std::string& constants_arg) {
  lhv::ModelConstants k = parse_constants(constants_arg);
  lhv::UnitVector3 a = parse_vector(a_arg, c.strict);
  lhv::UnitVector3 b = parse_vector(b_arg, c.strict);
  const double tol = 1e-12;

  std::vector<Check> checks;
  auto push = [&](const std::string& name, double value, double expected) {
    checks.push_back({name, value, expected, tol,
                      std::abs(value - expected) <= tol});
  };
  push("constants.27_C4", 27.0 * k.c * k.c * k.c * k.c, 1.0);
  push("constants.ln_beta_minus_C", k.residual_beta(), 0.0);
  push("constants.2lnf_minus_lnbeta", 2.0 * std::log(k.f) - std::log(k.beta), -1.0);
  checks.push_back({"constants.ordering_f_lt_1_lt_beta",
                    (0.0 < k.f && k.f < 1.0 && 1.0 < k.beta) ? 1.0 : 0.0, 1.0, 0.5,
                    0.0 < k.f && k.f < 1.0 && 1.0 < k.beta});

  bool moments_ok = true;
  std::string moment_error;
  try {
    lhv::MomentReport r = lhv::analytic_moments(a, b, k);
    push("moments.norm", r.norm, 1.0);
    push("moments.mean_A", r.mean_A, 0.0);
    push("moments.mean_B", r.mean_B, 0.0);
    push("moments.mean_A2", r.mean_A2, 1.0);
    push("moments.mean_B2", r.mean_B2, 1.0);
    push("moments.corr_AB", r.corr_AB, -a.dot(b));
    push("probability.universal", prob::probability(prob::Event::universal, k), 1.0);
    push("probability.empty", prob::probability(prob::Event::empty, k), 0.0);
    push("probability.additivity",
         prob::probability(prob::Event::universal, k) +
             prob::probability(prob::Event::empty, k),
         1.0);
  } catch (const std::exception& e) {
    moments_ok = false;
    moment_error = e.what();
    std::cerr << "moment evaluation failed: " << moment_error << "\n";
  }

  bool all_pass = moments_ok;
  for (const auto& chk : checks) all_pass = all_pass && chk.pass;

  json jchecks = json::array();
  std::fprintf(stderr, "%-36s %-24s %-24s %s\n", "check", "value", "expected", "status");
  for (const auto& chk : checks) {
    jchecks.push_back({{"name", chk.name},
                       {"value", chk.value},
                       {"expected", chk.expected},
                       {"tolerance", chk.tolerance},
                       {"pass", chk.pass}});
    std::fprintf(stderr, "%-36s %-24.16g %-24.16g %s\n", chk.name.c_str(), chk.value,
                 chk.expected, chk.pass ? "PASS" : "FAIL");
  }
  json out = {{"command", "verify"},
              {"constants", k},
              {"settings", {{"a", a}, {"b", b}}},
              {"checks", jchecks},
              {"all_pass", all_pass}};
  if (!moment_error.empty()) out["error"] = moment_error;
  if (!c.deterministic) out["env"] = env_block();
  int rc = emit(out, c);
  if (rc != kExitOk) return rc;
  return all_pass ? kExitOk : kExitCheckFailed;
}

// -------------------------------------------------------------------- fp ---
int cmd_fp(const CommonOpts& c, const std::string& weight, double reciprocal_upper,
           double upper, const std::string& breakpoints, const std::string& values,
           double epsilon) {
  lhv::ModelConstants k = lhv::ModelConstants::canonical();
  json out = {{"command", "fp"}};
  if (reciprocal_upper > 0.0) {
    out["op"] = "reciprocal";
    out["upper"] = reciprocal_upper;
    out["result"] = fp::fp_reciprocal(reciprocal_upper);
  } else {
    fp::PiecewiseWeight g = [&]() {
      if (weight == "plain") return lhv::unit_weight(k);
      if (weight == "sign-step") return lhv::sign_step_weight(k);
      if (weight == "custom")
        return fp::PiecewiseWeight(upper, parse_csv_doubles(breakpoints),
                                   parse_csv_doubles(values));
      throw std::invalid_argument("unknown weight: " + weight);
    }();
    out["weight"] = g;
    if (epsilon > 0.0) {
      double reg = fp::regularize_fp(g, epsilon);
      double fp_value = fp::fp_piecewise(g).value;
      out["op"] = "regularized";
      out["epsilon"] = epsilon;
      out["value"] = reg;
      out["finite_part"] = fp_value;
      out["counterterm_identity_residual"] =
          reg + g.at_zero() * std::log(epsilon) - fp_value;
    } else {
      out["op"] = "finite_part";
      out["result"] = fp::fp_piecewise(g);
    }
  }
  if (!c.deterministic) out["env"] = env_block();
  return emit(out, c);
}

// --------------------------------------------------------------- moments ---
int cmd_moments(const CommonOpts& c, const std::string& a_arg,
                const std::string& b_arg, const std::string& constants_arg) {
  lhv::ModelConstants k = parse_constants(constants_arg);
  lhv::UnitVector3 a = parse_vector(a_arg, c.strict);
  lhv::UnitVector3 b = parse_vector(b_arg, c.strict);
  json out = {{"command", "moments"},
              {"a", a},
              {"b", b},
              {"report", lhv::analytic_moments(a, b, k)}};
  if (!c.deterministic) out["env"] = env_block();
  return emit(out, c);
}

// ------------------------------------------------------------------ chsh ---
int cmd_chsh(const CommonOpts& c, const std::string& source_name, bool tsirelson,
             const std::string& plane_angles, const std::string& a_arg,
             const std::string& b_arg, const std::string& c_arg,
             const std::string& d_arg, bool search, double resolution,
             bool full_sphere, std::uint64_t trials, const std::string& grid_arg,
             std::uint64_t n_samples, std::uint64_t seed, const std::string& mode,
             int threads) {
  bell::CorrelationSource source = [&]() {
    if (source_name == "quantum") return bell::CorrelationSource::quantum();
    if (source_name == "analytic" || source_name == "model_analytic")
      return bell::CorrelationSource::model_analytic();
    if (source_name == "mc" || source_name == "model_mc") {
      bell::McSourceConfig cfg;
      cfg.grid = parse_grid(grid_arg);
      cfg.cfg = {n_samples, seed, threads};
      cfg.mode = (mode == "joint") ? mc::SweepMode::joint : mc::SweepMode::factorized;
      return bell::CorrelationSource::model_mc(std::move(cfg));
    }
    throw std::invalid_argument("unknown source: " + source_name);
  }();

  bell::ChshSettings settings = bell::ChshSettings::tsirelson();
  std::optional<std::array<double, 4>> angles;
  if (tsirelson) {
    angles = {{0.0, 45.0, 90.0, 135.0}};
  } else if (!plane_angles.empty()) {
    std::vector<double> ang = parse_csv_doubles(plane_angles);
    if (ang.size() != 4)
      throw std::invalid_argument("--plane-angles needs four angles in degrees");
    settings = bell::ChshSettings::from_plane_angles_deg(ang[0], ang[1], ang[2], ang[3]);
    angles = {{ang[0], ang[1], ang[2], ang[3]}};
  } else if (!a_arg.empty() || !b_arg.empty() || !c_arg.empty() || !d_arg.empty()) {
    if (a_arg.empty() || b_arg.empty() || c_arg.empty() || d_arg.empty())
      throw std::invalid_argument("give all four of --a --b --c --d");
    settings = {parse_vector(a_arg, c.strict), parse_vector(b_arg, c.strict),
                parse_vector(c_arg, c.strict), parse_vector(d_arg, c.strict)};
  } else {
    angles = {{0.0, 45.0, 90.0, 135.0}};
  }

  double p_ab = source.correlation(settings.a, settings.b);
  double p_ad = source.correlation(settings.a, settings.d);
  double p_cb = source.correlation(settings.c, settings.b);
  double p_cd = source.correlation(settings.c, settings.d);
  double s = std::abs(p_ab - p_ad) + std::abs(p_cb + p_cd);
  const double tsirelson_bound = 2.0 * std::sqrt(2.0);

  json out = {{"command", "chsh"},
              {"source", source.kind_name()},
              {"settings", settings},
              {"correlations",
               {{"ab", p_ab}, {"ad", p_ad}, {"cb", p_cb}, {"cd", p_cd}}},
              {"S", s},
              {"classical_bound", 2.0},
              {"tsirelson_bound", tsirelson_bound},
              {"violates_classical", s > 2.0},
              {"paradox", bell::paradox_report(source.constants())}};
  if (angles) out["angles_deg"] = *angles;

  if (search) {
    bell::SearchResult r =
        full_sphere
            ? bell::full_sphere_search(source, trials, seed)
            : bell::max_violation_search(source, resolution, {true, threads});
    out["search"] = r;
    out["search"]["resolution_deg"] = full_sphere ? json() : json(resolution);
  }
  if (!c.deterministic) out["env"] = env_block();
  return emit(out, c);
}

// ----------------------------------------------------------------- sweep ---
int cmd_sweep(const CommonOpts& c, const std::string& which, const std::string& a_arg,
              const std::string& b_arg, const std::string& grid_arg,
              std::uint64_t n_samples, std::uint64_t seed, const std::string& mode,
              int threads, double assert_tol, const std::string& format) {
  mc::EpsilonGrid grid = parse_grid(grid_arg);
  mc::McConfig cfg{n_samples, seed, threads};
  lhv::ModelConstants k = lhv::ModelConstants::canonical();

  mc::SweepFit fit;
  double reference = 0.0;
  lhv::UnitVector3 a{0, 0, 1}, b{0, 0, 1};
  if (which == "plain" || which == "signed") {
    mc::FactorKind kind =
        which == "plain" ? mc::FactorKind::plain : mc::FactorKind::signed_step;
    fit = mc::run_factor_sweep(kind, grid, cfg, k);
    reference = kind == mc::FactorKind::plain
                    ? fp::fp_piecewise(lhv::unit_weight(k)).value
                    : fp::fp_piecewise(lhv::sign_step_weight(k)).value;
  } else {
    static const std::map<std::string, lhv::Moment> kMoments = {
        {"norm", lhv::Moment::norm}, {"A", lhv::Moment::A},   {"B", lhv::Moment::B},
        {"A2", lhv::Moment::A2},     {"B2", lhv::Moment::B2}, {"AB", lhv::Moment::AB}};
    auto it = kMoments.find(which);
    if (it == kMoments.end())
      throw std::invalid_argument("unknown --which: " + which);
    a = parse_vector(a_arg, c.strict);
    b = parse_vector(b_arg, c.strict);
    mc::SweepMode m =
        (mode == "joint") ? mc::SweepMode::joint : mc::SweepMode::factorized;
    fit = mc::run_sweep(a, b, it->second, grid, cfg, m, k);
    reference = mc::analytic_reference(a, b, it->second, k);
  }

  double deviation = std::abs(fit.finite_part - reference);
  bool pass = assert_tol <= 0.0 || deviation <= assert_tol;

  int rc;
  if (format == "csv") {
    rc = emit_text(mc::sweep_to_csv(fit), c);
  } else {
    json out = {{"command", "sweep"}, {"which", which},
                {"mode", which == "plain" || which == "signed" ? "factor" : mode},
                {"a", a},           {"b", b},
                {"grid", grid.values}, {"n_samples", n_samples},
                {"seed", seed},     {"fit", fit},
                {"reference", reference}, {"deviation", deviation}};
    if (assert_tol > 0.0) {
      out["assert_tol"] = assert_tol;
      out["pass"] = pass;
    }
    if (!c.deterministic) out["env"] = env_block();
    rc = emit(out, c);
  }
  if (rc != kExitOk) return rc;
  return pass ? kExitOk : kExitCheckFailed;
}

// --------------------------------------------------------------- paradox ---
int cmd_paradox(const CommonOpts& c, const std::string& variant) {
  lhv::ModelConstants k = lhv::ModelConstants::canonical();
  if (variant == "f-eq-beta") {
    k.f = k.beta;  // no sign flip inside (0, beta)
  } else if (variant == "f-sqrt-beta") {
    k.f = std::sqrt(k.beta);  // 2 ln f - ln beta = 0
  } else if (variant != "canonical") {
    throw std::invalid_argument("unknown variant: " + variant);
  }
  json out = {{"command", "paradox"},
              {"variant", variant},
              {"constants", k},
              {"report", bell::paradox_report(k)}};
  if (!c.deterministic) out["env"] = env_block();
  return emit(out, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-part quadrature and CHSH audit for a singular-density "
               "hidden-variable model"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "analytic checklist: constants, moments, probability axioms");
  CommonOpts verify_c;
  std::string verify_a = "0,0,1", verify_b = "0,0,1", verify_constants;
  add_common(verify, verify_c);
  verify->add_option("--a", verify_a, "first setting, x,y,z");
  verify->add_option("--b", verify_b, "second setting, x,y,z");
  verify->add_option("--constants", verify_constants,
                     "override constants, e.g. C=0.5 or beta=1.5,f=0.75");

  // fp
  auto* fpcmd = app.add_subcommand("fp", "finite-part values of 1/lambda weights");
  CommonOpts fp_c;
  std::string fp_weight = "plain", fp_breakpoints, fp_values;
  double fp_recip = 0.0, fp_upper = 0.0, fp_eps = 0.0;
  add_common(fpcmd, fp_c);
  fpcmd->add_option("--weight", fp_weight, "plain | sign-step | custom");
  fpcmd->add_option("--reciprocal-upper", fp_recip, "evaluate Fp int_0^b 1/l instead");
  fpcmd->add_option("--upper", fp_upper, "custom weight: upper limit");
  fpcmd->add_option("--breakpoints", fp_breakpoints, "custom weight: comma-separated");
  fpcmd->add_option("--values", fp_values, "custom weight: comma-separated");
  fpcmd->add_option("--epsilon", fp_eps, "emit the regularized integral I(eps)");

  // moments
  auto* moments = app.add_subcommand("moments", "six analytic moments for a setting pair");
  CommonOpts mom_c;
  std::string mom_a = "0,0,1", mom_b = "0,0,1", mom_constants;
  add_common(moments, mom_c);
  moments->add_option("--a", mom_a, "first setting, x,y,z");
  moments->add_option("--b", mom_b, "second setting, x,y,z");
  moments->add_option("--constants", mom_constants, "override constants");

  // chsh
  auto* chsh = app.add_subcommand("chsh", "CHSH combination and violation search");
  CommonOpts chsh_c;
  std::string chsh_source = "quantum", chsh_angles, chsh_a, chsh_b, chsh_cc, chsh_d;
  std::string chsh_grid = "1e-2:1e-6:8", chsh_mode = "factorized";
  bool chsh_tsirelson = false, chsh_search = false, chsh_sphere = false;
  double chsh_res = 1.0;
  std::uint64_t chsh_trials = 200000, chsh_n = 100000, chsh_seed = default_seed();
  int chsh_threads = 0;
  add_common(chsh, chsh_c);
  chsh->add_option("--source", chsh_source, "quantum | analytic | mc");
  chsh->add_flag("--tsirelson", chsh_tsirelson, "use the 0/45/90/135 degree settings");
  chsh->add_option("--plane-angles", chsh_angles, "a,b,c,d in degrees (x-z plane)");
  chsh->add_option("--a", chsh_a, "setting a as x,y,z");
  chsh->add_option("--b", chsh_b, "setting b as x,y,z");
  chsh->add_option("--c", chsh_cc, "setting c as x,y,z");
  chsh->add_option("--d", chsh_d, "setting d as x,y,z");
  chsh->add_flag("--search", chsh_search, "run the max-violation search");
  chsh->add_option("--resolution", chsh_res, "search grid resolution in degrees");
  chsh->add_flag("--full-sphere", chsh_sphere, "search unrestricted directions");
  chsh->add_option("--trials", chsh_trials, "full-sphere random trials");
  chsh->add_option("--grid", chsh_grid, "mc source: epsilon grid start:end:count");
  chsh->add_option("--n", chsh_n, "mc source: samples per point");
  chsh->add_option("--seed", chsh_seed, "mc source: seed (PFBELL_SEED fallback)");
  chsh->add_option("--mode", chsh_mode, "mc source: factorized | joint");
  chsh->add_option("--threads", chsh_threads, "worker threads (0 = auto)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "epsilon sweep + finite-part extraction");
  CommonOpts sweep_c;
  std::string sweep_which = "AB", sweep_a = "0,0,1", sweep_b = "0,0,1";
  std::string sweep_grid = "1e-2:1e-6:8", sweep_mode = "factorized", sweep_format = "json";
  std::uint64_t sweep_n = 100000, sweep_seed = default_seed();
  int sweep_threads = 0;
  double sweep_tol = 0.0;
  add_common(sweep, sweep_c);
  sweep->add_option("--which", sweep_which,
                    "plain | signed | norm | A | B | A2 | B2 | AB");
  sweep->add_option("--a", sweep_a, "first setting, x,y,z");
  sweep->add_option("--b", sweep_b, "second setting, x,y,z");
  sweep->add_option("--grid", sweep_grid, "epsilon grid start:end:count");
  sweep->add_option("--n", sweep_n, "samples per grid point (and per factor)");
  sweep->add_option("--seed", sweep_seed, "seed (PFBELL_SEED fallback)");
  sweep->add_option("--mode", sweep_mode, "factorized | joint");
  sweep->add_option("--threads", sweep_threads, "worker threads (0 = auto)");
  sweep->add_option("--assert-tol", sweep_tol,
                    "exit 1 when |finite_part - reference| exceeds this");
  sweep->add_option("--format", sweep_format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // paradox
  auto* paradox = app.add_subcommand("paradox", "absolute-value contradiction report");
  CommonOpts par_c;
  std::string par_variant = "canonical";
  add_common(paradox, par_c);
  paradox->add_option("--variant", par_variant,
                      "canonical | f-eq-beta | f-sqrt-beta");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitBadConfig;
  }

  try {
    if (verify->parsed()) {
      apply_kernel(verify_c);
      return cmd_verify(verify_c, verify_a, verify_b, verify_constants);
    }
    if (fpcmd->parsed()) {
      apply_kernel(fp_c);
      return cmd_fp(fp_c, fp_weight, fp_recip, fp_upper, fp_breakpoints, fp_values,
                    fp_eps);
    }
    if (moments->parsed()) {
      apply_kernel(mom_c);
      return cmd_moments(mom_c, mom_a, mom_b, mom_constants);
    }
    if (chsh->parsed()) {
      apply_kernel(chsh_c);
      return cmd_chsh(chsh_c, chsh_source, chsh_tsirelson, chsh_angles, chsh_a,
                      chsh_b, chsh_cc, chsh_d, chsh_search, chsh_res, chsh_sphere,
                      chsh_trials, chsh_grid, chsh_n, chsh_seed, chsh_mode,
                      chsh_threads);
    }
    if (sweep->parsed()) {
      apply_kernel(sweep_c);
      return cmd_sweep(sweep_c, sweep_which, sweep_a, sweep_b, sweep_grid, sweep_n,
                       sweep_seed, sweep_mode, sweep_threads, sweep_tol,
                       sweep_format);
    }
    if (paradox->parsed()) {
      apply_kernel(par_c);
      return cmd_paradox(par_c, par_variant);
    }
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitBadConfig;
}
