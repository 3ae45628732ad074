#pragma once

#include "sxr/axioms.hpp"
#include "sxr/cheat.hpp"
#include "sxr/demand.hpp"
#include "sxr/dynamics.hpp"
#include "sxr/ode.hpp"
#include "sxr/preference.hpp"
#include "sxr/types.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace sxr::io {

using json = nlohmann::json;

json to_json(const Vec& v);
Vec vec_from_json(const json& j);

json to_json(const Box& region);
json to_json(const AntonelliReport& rep);
json to_json(const TangentFormVerdict& v);
json to_json(const AxiomVerdict& v);
json to_json(const PreferenceVerdict& v);
json to_json(const BudgetProblem& pr, const DemandResult& res);
json to_json(const StabilityReport& rep);
json to_json(const VilleCurve& curve);
json to_json(const CheatOutcome& outcome);

/// Write via temp file + rename so readers never observe a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json_atomic(const std::filesystem::path& path, const json& j);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
void write_polyline_csv(const std::filesystem::path& path, const std::vector<double>& times,
                        const std::vector<Vec>& points);

/// Per-sample rows "t,x1..xn,gdot" where gdot is the directional
/// derivative g(x(t)) . x'(t) re-evaluated from the curve definition.
void write_ville_curve_csv(const std::filesystem::path& path, const Field& field,
                           const VilleCurve& curve);

}  // namespace sxr::io
