#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "optomech/params.hpp"

namespace optomech {

// Loads a JSON config with the exact SystemParams field names. Ratio
// conveniences (eta_over_kappa, xi1_over_kappa, xi2_over_xi1,
// gamma_c_over_kappa, delta_c_over_kappa, omega_sw_over_omega_r) are resolved
// at load; giving both the absolute and the ratio form of the same quantity
// is an error. Unknown keys are rejected by name.
SystemParams load_config(const std::string& path);
SystemParams params_from_json(const nlohmann::json& j);

// Fully resolved snapshot (absolute rad/s values only); feeding it back
// through params_from_json reproduces identical values.
nlohmann::json params_to_json(const SystemParams& p);

}  // namespace optomech
