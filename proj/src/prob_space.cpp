#include "pfbell/prob_space.hpp"

namespace pfbell::prob {

DomainSpec DomainSpec::canonical(const lhv::ModelConstants& k) {
  DomainSpec d;
  d.n_range = {1, 2, 3};
  d.lambda_range = RealRange::interval(-k.beta, k.beta);
  d.chi_range = RealRange::real_line();
  d.eta_range = RealRange::interval(-1.0, 1.0);
  return d;
}

int set_delta(const DomainSpec& x, const DomainSpec& y) { return x == y ? 1 : 0; }

int set_delta(Event q, Event r) { return q == r ? 1 : 0; }

bool gamma(const lhv::HiddenSample& s, const DomainSpec& declared,
           const lhv::ModelConstants& k) {
  if (set_delta(declared, DomainSpec::canonical(k)) != 1) return false;
  return s.valid(k);
}

double probability(Event q, const lhv::ModelConstants& k) {
  // <rho> does not depend on the settings; any unit pair works.
  lhv::UnitVector3 zhat{0.0, 0.0, 1.0};
  double norm = lhv::analytic_moments(zhat, zhat, k).norm;
  return set_delta(q, Event::universal) * norm;
}

}  // namespace pfbell::prob
