#pragma once

#include <vector>

#include "pfbell/lhv_model.hpp"

namespace pfbell::prob {

// Range descriptors for the nine hidden variables. The chi range is the
// whole real line and is kept symbolic: gamma compares descriptors, never
// floating bounds, for that clause.
enum class RealRangeKind { bounded, real_line };

struct RealRange {
  RealRangeKind kind = RealRangeKind::bounded;
  double lo = 0.0;
  double hi = 0.0;

  static RealRange interval(double lo, double hi) { return {RealRangeKind::bounded, lo, hi}; }
  static RealRange real_line() { return {RealRangeKind::real_line, 0.0, 0.0}; }
  bool operator==(const RealRange& o) const {
    if (kind != o.kind) return false;
    if (kind == RealRangeKind::real_line) return true;
    return lo == o.lo && hi == o.hi;
  }
};

struct DomainSpec {
  std::vector<int> n_range;  // index set for each n_q
  RealRange lambda_range;    // for each lambda_tau
  RealRange chi_range;
  RealRange eta_range;       // for each eta_s

  static DomainSpec canonical(const lhv::ModelConstants& k = lhv::ModelConstants::canonical());
  bool operator==(const DomainSpec&) const = default;
};

// delta(X, Y) = 1 when X = Y, 0 otherwise (exact structural equality)
int set_delta(const DomainSpec& x, const DomainSpec& y);

// The binary event algebra {Xi, {}} over the universal domain.
enum class Event { universal, empty };

struct EventAlgebra {
  DomainSpec universal;

  static Event complement(Event q) { return q == Event::universal ? Event::empty : Event::universal; }
  static Event union_of(Event p, Event q) {
    return (p == Event::universal || q == Event::universal) ? Event::universal : Event::empty;
  }
  static Event intersect(Event p, Event q) {
    return (p == Event::universal && q == Event::universal) ? Event::universal : Event::empty;
  }
};

int set_delta(Event q, Event r);

// Gamma gate: true iff the declared ranges equal the canonical ones exactly
// and every sample coordinate lies inside them.
bool gamma(const lhv::HiddenSample& s, const DomainSpec& declared,
           const lhv::ModelConstants& k = lhv::ModelConstants::canonical());

// P[Q] = delta(Q, Xi) * <rho>, with <rho> taken from the moment engine.
double probability(Event q, const lhv::ModelConstants& k = lhv::ModelConstants::canonical());

}  // namespace pfbell::prob
