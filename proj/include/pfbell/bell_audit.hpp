#pragma once

#include <array>
#include <optional>
#include <string>

#include "pfbell/lhv_model.hpp"
#include "pfbell/mc_engine.hpp"

namespace pfbell::bell {

struct ChshSettings {
  lhv::UnitVector3 a, b, c, d;

  // the standard 0/45/90/135 degree coplanar settings
  static ChshSettings tsirelson();
  static ChshSettings from_plane_angles_deg(double ta, double tb, double tc,
                                            double td);
};

struct McSourceConfig {
  mc::EpsilonGrid grid;
  mc::McConfig cfg;
  mc::SweepMode mode = mc::SweepMode::factorized;
};

class CorrelationSource {
public:
  enum class Kind { quantum, model_analytic, model_mc };

  static CorrelationSource quantum();
  static CorrelationSource model_analytic(
      lhv::ModelConstants k = lhv::ModelConstants::canonical());
  static CorrelationSource model_mc(
      McSourceConfig config, lhv::ModelConstants k = lhv::ModelConstants::canonical());

  double correlation(const lhv::UnitVector3& a, const lhv::UnitVector3& b) const;
  Kind kind() const { return kind_; }
  const char* kind_name() const;
  bool deterministic() const { return kind_ != Kind::model_mc; }
  const lhv::ModelConstants& constants() const { return k_; }

private:
  CorrelationSource(Kind kind, lhv::ModelConstants k) : kind_(kind), k_(k) {}
  Kind kind_;
  lhv::ModelConstants k_;
  std::optional<McSourceConfig> mc_;
};

// S = |P(a,b) - P(a,d)| + |P(c,b) + P(c,d)|
double chsh_value(const ChshSettings& settings, const CorrelationSource& source);

struct SearchResult {
  ChshSettings settings;
  std::optional<std::array<double, 4>> angles_deg;  // set for planar searches
  double s_max = 0.0;
};

struct SearchOptions {
  bool refine = true;
  int threads = 0;
};

// Grid search over coplanar settings at the given angular resolution,
// followed by local pattern refinement. The first angle is pinned to zero
// (the correlation family is rotation invariant; this is verified at
// runtime) and the returned maximum is never below any scanned grid value.
SearchResult max_violation_search(const CorrelationSource& source,
                                  double resolution_deg, SearchOptions opt = {});

// Unrestricted random search over four unit vectors; optional CLI path.
SearchResult full_sphere_search(const CorrelationSource& source,
                                std::uint64_t n_trials, std::uint64_t seed,
                                bool refine = true);

struct ParadoxReport {
  double lhs_abs_finite_part = 0.0;  // |Fp int sign(f - l)/l|
  double rhs_bound = 0.0;            // Fp int 1/l
  bool contradiction = false;
  std::string interpretation;
};

// The absolute-value check: a monotone |.| bound that holds for nonnegative
// densities fails for the signed finite-part weight.
ParadoxReport paradox_report(
    const lhv::ModelConstants& k = lhv::ModelConstants::canonical());

}  // namespace pfbell::bell
