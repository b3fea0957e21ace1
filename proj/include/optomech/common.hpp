#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace optomech {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Pinned physical constants (SI).
inline constexpr double k_hbar = 1.054571817e-34;      // J s
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K

// All numerical tolerances live here so tests and library agree on them.
struct Tolerances {
    static constexpr double lyapunov_residual_rel = 1e-8;
    static constexpr double symplectic_slack = 1e-9;
    static constexpr double root_bisection_rel = 1e-12;
    static constexpr double root_dedupe_rel = 1e-9;
    static constexpr double routh_marginal_rel = 1e-12;
    static constexpr double fixed_point_residual_rel = 1e-9;
    static constexpr double en_radicand_slack = 1e-10;
    static constexpr double bose_exp_cutoff = 700.0;
};

// Invalid or inconsistent user input (config files, flag combinations).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation that cannot proceed (non-finite state, unphysical matrix, ...).
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested a stationary quantity of a system with no stationary state.
class NoStationaryState : public NumericalError {
  public:
    explicit NoStationaryState(const std::string& msg) : NumericalError(msg) {}
};

// The closed-form mechanical displacement diverges at omega_m + 2*xi2*I = 0.
class SofteningPoleError : public NumericalError {
  public:
    explicit SofteningPoleError(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace optomech
