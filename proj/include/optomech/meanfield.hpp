#pragma once

#include <array>
#include <vector>

#include "optomech/model.hpp"

namespace optomech {

enum class MeanFieldModel { full, adiabatic };

struct TrajectoryConfig {
    MeanFieldModel model = MeanFieldModel::adiabatic;
    double t_end = 0.0;      // seconds
    double dt = 0.0;         // fixed step, seconds
    int sample_stride = 1;   // record every N-th step
    MeanFieldState initial;  // for the adiabatic model only q,Q (and p,P as
                             // velocities/omega scaling) are used
};

struct Trajectory {
    std::vector<double> times;  // seconds
    std::vector<MeanFieldState> states;
    std::vector<double> photon_numbers;
};

// Full six-variable mean-field derivative, Heisenberg-picture sign
// convention q' = +omega_m p (consistent with the drift matrix).
std::array<double, 6> rhs_full(const SystemParams& p, const DerivedParams& d,
                               const MeanFieldState& s);

// Reduced two-oscillator state once the optical field is slaved.
struct AdiabaticState {
    double q = 0.0;
    double v_q = 0.0;  // dq/dt
    double Q = 0.0;
    double v_Q = 0.0;  // dQ/dt
};

// Algebraic optical field alpha = -eta / (i*Delta(q,Q) + kappa).
std::complex<double> adiabatic_field(const SystemParams& p, const DerivedParams& d,
                                     double q, double Q);

std::array<double, 4> rhs_adiabatic(const SystemParams& p, const DerivedParams& d,
                                    const AdiabaticState& s);

// Classical fixed-step 4th-order integration of either model.
Trajectory integrate(const SystemParams& p, const DerivedParams& d,
                     const TrajectoryConfig& cfg);

struct EffectiveFrequencies {
    double omega_m_eff = 0.0;  // sqrt(omega_m*(omega_m + 2*xi2*I)); 0 if softening
    double omega_c_eff = 0.0;  // sqrt(omega_c^2 + gamma_c^2)
    bool softening = false;    // radicand < 0: optical-spring instability
};

EffectiveFrequencies effective_frequencies(const SystemParams& p, const DerivedParams& d,
                                           double photon_number);

// Oscillation-frequency estimator used by tests: mean zero-crossing interval
// of the detrended signal over the last half of the record. Returns the
// angular frequency, or 0 if fewer than two crossings are found.
double estimate_oscillation_frequency(const std::vector<double>& times,
                                      const std::vector<double>& values);

}  // namespace optomech
