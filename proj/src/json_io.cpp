#include "pfbell/json_io.hpp"

#include <cmath>
#include <cstdio>

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

namespace pfbell::fp {

void to_json(nlohmann::json& j, const FinitePartValue& v) {
  const char* method = "closed_form";
  if (v.method == FpMethod::subtraction) method = "subtraction";
  if (v.method == FpMethod::regularized_extrapolation) method = "regularized_extrapolation";
  j = {{"value", v.value}, {"method", method}, {"error_estimate", v.error_estimate}};
}

void to_json(nlohmann::json& j, const PiecewiseWeight& w) {
  std::vector<double> breakpoints(w.edges().begin(), w.edges().end() - 1);
  j = {{"upper", w.upper()}, {"breakpoints", breakpoints}, {"values", w.values()}};
}

PiecewiseWeight piecewise_weight_from_json(const nlohmann::json& j) {
  return PiecewiseWeight(j.at("upper").get<double>(),
                         j.at("breakpoints").get<std::vector<double>>(),
                         j.at("values").get<std::vector<double>>());
}

}  // namespace pfbell::fp

namespace pfbell::lhv {

void to_json(nlohmann::json& j, const UnitVector3& v) {
  j = {v.x, v.y, v.z};
}

void to_json(nlohmann::json& j, const MomentReport& r) {
  j = {{"norm", r.norm},       {"mean_A", r.mean_A},   {"mean_B", r.mean_B},
       {"mean_A2", r.mean_A2}, {"mean_B2", r.mean_B2}, {"corr_AB", r.corr_AB}};
}

void to_json(nlohmann::json& j, const ModelConstants& k) {
  j = {{"C", k.c}, {"beta", k.beta}, {"f", k.f}};
}

}  // namespace pfbell::lhv

namespace pfbell::prob {

void to_json(nlohmann::json& j, const DomainSpec& d) {
  auto range = [](const RealRange& r) -> nlohmann::json {
    if (r.kind == RealRangeKind::real_line) return {{"kind", "real_line"}};
    return {{"kind", "interval"}, {"lo", r.lo}, {"hi", r.hi}};
  };
  j = {{"n_range", d.n_range},
       {"lambda_range", range(d.lambda_range)},
       {"chi_range", range(d.chi_range)},
       {"eta_range", range(d.eta_range)}};
}

}  // namespace pfbell::prob

namespace pfbell::mc {

void to_json(nlohmann::json& j, const FactorEstimate& e) {
  j = {{"epsilon", e.epsilon},
       {"ln_epsilon", std::log(e.epsilon)},
       {"mean", e.mean},
       {"std_err", e.std_err},
       {"n_samples", e.n_samples},
       {"seed", e.seed}};
}

void to_json(nlohmann::json& j, const SweepFit& f) {
  j = {{"grid", f.grid.values},
       {"estimates", f.estimates},
       {"degree", f.degree},
       {"finite_part", f.finite_part},
       {"finite_part_err", f.finite_part_err},
       {"coefficients", f.coefficients},
       {"coefficient_errs", f.coefficient_errs}};
}

std::string sweep_to_csv(const SweepFit& f) {
  std::string out = "epsilon,ln_epsilon,estimate,std_err\n";
  for (const auto& e : f.estimates) {
    out += fmt17(e.epsilon) + "," + fmt17(std::log(e.epsilon)) + "," +
           fmt17(e.mean) + "," + fmt17(e.std_err) + "\n";
  }
  out += "finite_part,finite_part_err,degree\n";
  out += fmt17(f.finite_part) + "," + fmt17(f.finite_part_err) + "," +
         std::to_string(f.degree) + "\n";
  return out;
}

}  // namespace pfbell::mc

namespace pfbell::bell {

void to_json(nlohmann::json& j, const ChshSettings& s) {
  j = {{"a", s.a}, {"b", s.b}, {"c", s.c}, {"d", s.d}};
}

void to_json(nlohmann::json& j, const ParadoxReport& r) {
  j = {{"lhs_abs_finite_part", r.lhs_abs_finite_part},
       {"rhs_bound", r.rhs_bound},
       {"contradiction", r.contradiction},
       {"interpretation", r.interpretation}};
}

void to_json(nlohmann::json& j, const SearchResult& r) {
  j = {{"settings", r.settings}, {"s_max", r.s_max}};
  if (r.angles_deg) j["angles_deg"] = *r.angles_deg;
}

}  // namespace pfbell::bell
