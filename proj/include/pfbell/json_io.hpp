#pragma once

#include <string>

#include <json.hpp>

#include "pfbell/bell_audit.hpp"
#include "pfbell/fp_quadrature.hpp"
#include "pfbell/lhv_model.hpp"
#include "pfbell/mc_engine.hpp"
#include "pfbell/prob_space.hpp"

namespace pfbell::fp {
void to_json(nlohmann::json& j, const FinitePartValue& v);
void to_json(nlohmann::json& j, const PiecewiseWeight& w);
PiecewiseWeight piecewise_weight_from_json(const nlohmann::json& j);
}  // namespace pfbell::fp

namespace pfbell::lhv {
void to_json(nlohmann::json& j, const UnitVector3& v);
void to_json(nlohmann::json& j, const MomentReport& r);
void to_json(nlohmann::json& j, const ModelConstants& k);
}  // namespace pfbell::lhv

namespace pfbell::prob {
void to_json(nlohmann::json& j, const DomainSpec& d);
}

namespace pfbell::mc {
void to_json(nlohmann::json& j, const FactorEstimate& e);
void to_json(nlohmann::json& j, const SweepFit& f);
// CSV: one row per grid point (epsilon, ln_epsilon, estimate, std_err), then
// a summary header and row (finite_part, finite_part_err, degree).
std::string sweep_to_csv(const SweepFit& f);
}  // namespace pfbell::mc

namespace pfbell::bell {
void to_json(nlohmann::json& j, const ChshSettings& s);
void to_json(nlohmann::json& j, const ParadoxReport& r);
void to_json(nlohmann::json& j, const SearchResult& r);
}  // namespace pfbell::bell
