#include "optomech/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace optomech {

namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
}

// Resolves a quantity given either absolutely or as a ratio to a base value.
double resolve(const json& j, const std::string& abs_key, const std::string& ratio_key,
               double base, bool required, double fallback = 0.0) {
    const bool has_abs = j.contains(abs_key);
    const bool has_ratio = j.contains(ratio_key);
    if (has_abs && has_ratio) {
        throw ConfigError("config keys '" + abs_key + "' and '" + ratio_key +
                          "' are mutually exclusive");
    }
    if (has_abs) return get_number(j, abs_key);
    if (has_ratio) return get_number(j, ratio_key) * base;
    if (required) {
        throw ConfigError("config is missing '" + abs_key + "' (or '" + ratio_key + "')");
    }
    return fallback;
}

}  // namespace

SystemParams params_from_json(const json& j) {
    static const std::set<std::string> known = {
        "kappa",       "omega_m",     "gamma_m",
        "gamma_c",     "xi1",         "xi2",
        "eta",         "delta_c",     "omega_r",
        "omega_sw",    "n_atoms",     "u0",
        "temperature", "n_s",         "phi",
        "squeezing_enabled",          "d_convention",
        "eta_over_kappa",             "xi1_over_kappa",
        "xi2_over_xi1",               "gamma_c_over_kappa",
        "delta_c_over_kappa",         "omega_sw_over_omega_r"};
    for (const auto& item : j.items()) {
        if (known.find(item.key()) == known.end()) {
            throw ConfigError("unknown config key '" + item.key() + "'");
        }
    }

    SystemParams p;
    if (!j.contains("kappa")) throw ConfigError("config is missing 'kappa'");
    p.kappa = get_number(j, "kappa");
    if (!j.contains("omega_m")) throw ConfigError("config is missing 'omega_m'");
    p.omega_m = get_number(j, "omega_m");
    if (!j.contains("gamma_m")) throw ConfigError("config is missing 'gamma_m'");
    p.gamma_m = get_number(j, "gamma_m");
    if (!j.contains("omega_r")) throw ConfigError("config is missing 'omega_r'");
    p.omega_r = get_number(j, "omega_r");
    if (!j.contains("n_atoms")) throw ConfigError("config is missing 'n_atoms'");
    p.n_atoms = get_number(j, "n_atoms");
    if (!j.contains("u0")) throw ConfigError("config is missing 'u0'");
    p.u0 = get_number(j, "u0");
    if (!j.contains("temperature")) throw ConfigError("config is missing 'temperature'");
    p.temperature = get_number(j, "temperature");

    p.gamma_c = resolve(j, "gamma_c", "gamma_c_over_kappa", p.kappa, true);
    p.eta = resolve(j, "eta", "eta_over_kappa", p.kappa, true);
    p.delta_c = resolve(j, "delta_c", "delta_c_over_kappa", p.kappa, true);
    p.xi1 = resolve(j, "xi1", "xi1_over_kappa", p.kappa, true);
    p.xi2 = resolve(j, "xi2", "xi2_over_xi1", p.xi1, false, 0.0);
    p.omega_sw = resolve(j, "omega_sw", "omega_sw_over_omega_r", p.omega_r, true);

    if (j.contains("n_s")) p.n_s = get_number(j, "n_s");
    if (j.contains("phi")) p.phi = get_number(j, "phi");
    if (j.contains("squeezing_enabled")) {
        const auto& v = j.at("squeezing_enabled");
        if (!v.is_boolean()) throw ConfigError("config key 'squeezing_enabled' must be a boolean");
        p.squeezing_enabled = v.get<bool>();
    }
    if (j.contains("d_convention")) {
        const std::string conv = j.at("d_convention").get<std::string>();
        if (conv == "standard") {
            p.d_convention = DConvention::standard;
        } else if (conv == "paper-literal") {
            p.d_convention = DConvention::paper_literal;
        } else {
            throw ConfigError("config key 'd_convention' must be 'standard' or 'paper-literal'");
        }
    }
    p.validate();
    return p;
}

SystemParams load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    return params_from_json(j);
}

nlohmann::json params_to_json(const SystemParams& p) {
    json j;
    j["kappa"] = p.kappa;
    j["omega_m"] = p.omega_m;
    j["gamma_m"] = p.gamma_m;
    j["gamma_c"] = p.gamma_c;
    j["xi1"] = p.xi1;
    j["xi2"] = p.xi2;
    j["eta"] = p.eta;
    j["delta_c"] = p.delta_c;
    j["omega_r"] = p.omega_r;
    j["omega_sw"] = p.omega_sw;
    j["n_atoms"] = p.n_atoms;
    j["u0"] = p.u0;
    j["temperature"] = p.temperature;
    j["n_s"] = p.n_s;
    j["phi"] = p.phi;
    j["squeezing_enabled"] = p.squeezing_enabled;
    j["d_convention"] =
        p.d_convention == DConvention::standard ? "standard" : "paper-literal";
    return j;
}

}  // namespace optomech
