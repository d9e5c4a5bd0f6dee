#include "pfbell/bell_audit.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pfbell/fp_quadrature.hpp"

namespace pfbell::bell {

namespace {

struct GridBest {
  double s = -1.0;
  std::array<int, 3> idx{0, 0, 0};  // (ib, ic, id); ia pinned to 0

  bool better_than(const GridBest& o) const {
    if (s != o.s) return s > o.s;
    return idx < o.idx;
  }
};

int effective_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

double chsh_combination(double p_ab, double p_ad, double p_cb, double p_cd) {
  return std::abs(p_ab - p_ad) + std::abs(p_cb + p_cd);
}

lhv::UnitVector3 sphere_point(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

}  // namespace

ChshSettings ChshSettings::tsirelson() {
  return from_plane_angles_deg(0.0, 45.0, 90.0, 135.0);
}

ChshSettings ChshSettings::from_plane_angles_deg(double ta, double tb, double tc,
                                                 double td) {
  return {lhv::UnitVector3::from_plane_angle_deg(ta),
          lhv::UnitVector3::from_plane_angle_deg(tb),
          lhv::UnitVector3::from_plane_angle_deg(tc),
          lhv::UnitVector3::from_plane_angle_deg(td)};
}

CorrelationSource CorrelationSource::quantum() {
  return CorrelationSource(Kind::quantum, lhv::ModelConstants::canonical());
}

CorrelationSource CorrelationSource::model_analytic(lhv::ModelConstants k) {
  return CorrelationSource(Kind::model_analytic, k);
}

CorrelationSource CorrelationSource::model_mc(McSourceConfig config,
                                              lhv::ModelConstants k) {
  CorrelationSource s(Kind::model_mc, k);
  s.mc_ = std::move(config);
  return s;
}

const char* CorrelationSource::kind_name() const {
  switch (kind_) {
    case Kind::quantum: return "quantum";
    case Kind::model_analytic: return "model_analytic";
    case Kind::model_mc: return "model_mc";
  }
  return "?";
}

double CorrelationSource::correlation(const lhv::UnitVector3& a,
                                      const lhv::UnitVector3& b) const {
  if (!a.is_unit() || !b.is_unit())
    throw std::domain_error("correlation: settings must be unit vectors");
  switch (kind_) {
    case Kind::quantum:
      return -a.dot(b);
    case Kind::model_analytic:
      return lhv::analytic_moments(a, b, k_).corr_AB;
    case Kind::model_mc: {
      const McSourceConfig& c = *mc_;
      return mc::run_sweep(a, b, lhv::Moment::AB, c.grid, c.cfg, c.mode, k_)
          .finite_part;
    }
  }
  throw std::logic_error("correlation: bad source");
}

double chsh_value(const ChshSettings& s, const CorrelationSource& source) {
  return chsh_combination(source.correlation(s.a, s.b), source.correlation(s.a, s.d),
                          source.correlation(s.c, s.b), source.correlation(s.c, s.d));
}

SearchResult max_violation_search(const CorrelationSource& source,
                                  double resolution_deg, SearchOptions opt) {
  if (!(resolution_deg > 0.0))
    throw std::domain_error("max_violation_search: resolution must be positive");
  if (!source.deterministic())
    throw std::domain_error(
        "max_violation_search: requires a deterministic correlation source");
  int n = static_cast<int>(std::lround(360.0 / resolution_deg));
  // the scan is O(n^3); 1440 (0.25 deg) keeps the worst case in seconds
  if (n < 2 || n > 1440)
    throw std::domain_error("max_violation_search: resolution out of range");
  double step = 360.0 / n;

  // P depends only on the angle difference; build the 1-D correlation table
  // through the source and spot-check the invariance it relies on.
  std::vector<double> corr(static_cast<std::size_t>(n));
  lhv::UnitVector3 v0 = lhv::UnitVector3::from_plane_angle_deg(0.0);
  for (int i = 0; i < n; ++i)
    corr[static_cast<std::size_t>(i)] =
        source.correlation(v0, lhv::UnitVector3::from_plane_angle_deg(i * step));
  {
    std::mt19937 check_rng(12345);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int t = 0; t < 32; ++t) {
      int i = pick(check_rng), j = pick(check_rng);
      double direct =
          source.correlation(lhv::UnitVector3::from_plane_angle_deg(i * step),
                             lhv::UnitVector3::from_plane_angle_deg(j * step));
      double table = corr[static_cast<std::size_t>(((j - i) % n + n) % n)];
      if (std::abs(direct - table) > 1e-9)
        throw std::logic_error(
            "max_violation_search: source is not rotation invariant");
    }
  }

  auto scan_range = [&](int ib_lo, int ib_hi) {
    GridBest best;
    for (int ib = ib_lo; ib < ib_hi; ++ib) {
      double p_ab = corr[static_cast<std::size_t>(ib)];
      for (int ic = 0; ic < n; ++ic) {
        double p_cb = corr[static_cast<std::size_t>(((ib - ic) % n + n) % n)];
        for (int id = 0; id < n; ++id) {
          double p_ad = corr[static_cast<std::size_t>(id)];
          double p_cd = corr[static_cast<std::size_t>(((id - ic) % n + n) % n)];
          double s = chsh_combination(p_ab, p_ad, p_cb, p_cd);
          if (s > best.s) best = {s, {ib, ic, id}};
        }
      }
    }
    return best;
  };

  int workers = std::min(effective_threads(opt.threads), n);
  GridBest best;
  if (workers <= 1) {
    best = scan_range(0, n);
  } else {
    std::vector<std::future<GridBest>> futs;
    int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      int lo = w * chunk, hi = std::min(n, lo + chunk);
      if (lo >= hi) break;
      futs.push_back(std::async(std::launch::async, scan_range, lo, hi));
    }
    // fold in worker order: deterministic lexicographic tie-break
    for (auto& fut : futs) {
      GridBest candidate = fut.get();
      if (candidate.better_than(best)) best = candidate;
    }
  }

  std::array<double, 4> angles = {0.0, best.idx[0] * step, best.idx[1] * step,
                                  best.idx[2] * step};
  double s_best = best.s;

  if (opt.refine) {
    auto eval = [&](const std::array<double, 4>& ang) {
      return chsh_value(ChshSettings::from_plane_angles_deg(ang[0], ang[1], ang[2],
                                                            ang[3]),
                        source);
    };
    double stride = step / 2.0;
    for (int iter = 0; stride > 1e-7 && iter < 20000; ++iter) {
      bool improved = false;
      for (int coord = 1; coord < 4; ++coord) {  // angle a stays pinned
        for (double dir : {+1.0, -1.0}) {
          std::array<double, 4> trial = angles;
          trial[static_cast<std::size_t>(coord)] += dir * stride;
          double s = eval(trial);
          if (s > s_best) {
            s_best = s;
            angles = trial;
            improved = true;
          }
        }
      }
      if (!improved) stride *= 0.5;
    }
  }

  SearchResult result;
  result.angles_deg = angles;
  result.settings = ChshSettings::from_plane_angles_deg(angles[0], angles[1],
                                                        angles[2], angles[3]);
  result.s_max = std::max(s_best, best.s);
  return result;
}

SearchResult full_sphere_search(const CorrelationSource& source,
                                std::uint64_t n_trials, std::uint64_t seed,
                                bool refine) {
  if (!source.deterministic())
    throw std::domain_error(
        "full_sphere_search: requires a deterministic correlation source");
  if (n_trials == 0) throw std::domain_error("full_sphere_search: n_trials == 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto draw_angles = [&]() {
    std::array<double, 8> t{};
    for (int v = 0; v < 4; ++v) {
      t[static_cast<std::size_t>(2 * v)] = std::acos(2.0 * u01(rng) - 1.0);
      t[static_cast<std::size_t>(2 * v + 1)] = 2.0 * std::numbers::pi * u01(rng);
    }
    return t;
  };
  auto eval = [&](const std::array<double, 8>& t) {
    ChshSettings s{sphere_point(t[0], t[1]), sphere_point(t[2], t[3]),
                   sphere_point(t[4], t[5]), sphere_point(t[6], t[7])};
    return chsh_value(s, source);
  };

  std::array<double, 8> best_t = draw_angles();
  double best_s = eval(best_t);
  for (std::uint64_t i = 1; i < n_trials; ++i) {
    auto t = draw_angles();
    double s = eval(t);
    if (s > best_s) {
      best_s = s;
      best_t = t;
    }
  }
  if (refine) {
    double stride = 0.2;
    for (int iter = 0; stride > 1e-7 && iter < 20000; ++iter) {
      bool improved = false;
      for (std::size_t coord = 0; coord < 8; ++coord) {
        for (double dir : {+1.0, -1.0}) {
          auto trial = best_t;
          trial[coord] += dir * stride;
          double s = eval(trial);
          if (s > best_s) {
            best_s = s;
            best_t = trial;
            improved = true;
          }
        }
      }
      if (!improved) stride *= 0.5;
    }
  }
  SearchResult result;
  result.settings = {sphere_point(best_t[0], best_t[1]), sphere_point(best_t[2], best_t[3]),
                     sphere_point(best_t[4], best_t[5]), sphere_point(best_t[6], best_t[7])};
  result.s_max = best_s;
  return result;
}

ParadoxReport paradox_report(const lhv::ModelConstants& k) {
  ParadoxReport r;
  r.lhs_abs_finite_part = std::abs(fp::fp_piecewise(lhv::sign_step_weight(k)).value);
  r.rhs_bound = fp::fp_reciprocal(k.beta).value;
  r.contradiction = r.lhs_abs_finite_part > r.rhs_bound;
  r.interpretation =
      "The bound |Fp int w g| <= Fp int w |g| presumes a nonnegative measure; "
      "for the signed finite-part weight it fails, so the absolute-value "
      "monotonicity step used in Bell-type derivations does not apply to this "
      "density.";
  return r;
}

}  // namespace pfbell::bell
