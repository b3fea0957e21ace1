#pragma once

#include "optomech/common.hpp"

namespace optomech {

enum class DConvention { standard, paper_literal };

// All physical inputs of the model. Frequencies and rates are angular (rad/s).
// Immutable by convention: build once, share freely across threads.
struct SystemParams {
    double kappa = 0.0;        // cavity amplitude decay rate
    double omega_m = 0.0;      // bare mechanical frequency
    double gamma_m = 0.0;      // mechanical damping rate
    double gamma_c = 0.0;      // Bogoliubov damping rate
    double xi1 = 0.0;          // linear optomechanical coupling
    double xi2 = 0.0;          // quadratic optomechanical coupling (signed)
    double eta = 0.0;          // pump drive amplitude
    double delta_c = 0.0;      // effective Stark-shifted detuning (sweep variable)
    double omega_r = 0.0;      // recoil frequency
    double omega_sw = 0.0;     // s-wave scattering frequency
    double n_atoms = 0.0;      // atom number N
    double u0 = 0.0;           // optical lattice barrier height per photon
    double temperature = 0.0;  // bath temperature, Kelvin
    double n_s = 0.0;          // squeezed-vacuum photon number
    double phi = 0.0;          // squeezing phase, radians
    bool squeezing_enabled = false;
    DConvention d_convention = DConvention::standard;

    // Throws ConfigError naming the offending field if an invariant fails.
    void validate() const;
};

// Quantities computed once per parameter set.
struct DerivedParams {
    double chi = 1.0;      // Bogoliubov quadrature scale
    double omega_c = 0.0;  // Bogoliubov frequency
    double zeta = 0.0;     // BEC-field coupling
    double n_m = 0.0;      // mechanical thermal occupation
    double n_c = 0.0;      // Bogoliubov thermal occupation
    double r_sq = 0.0;     // squeezing strength r = asinh(sqrt(N_s))
    double m_s_re = 0.0;   // Re M_s = (1/2) sinh(2r) cos(phi)
    double m_s_im = 0.0;   // Im M_s
};

DerivedParams derive_params(const SystemParams& p);

struct ValidityReport {
    bool backaction_ok = true;       // weakly interacting regime U0*I <= 10*omega_r
    double backaction_ratio = 0.0;   // U0*I / (10*omega_r)
    double sideband_ratio = 0.0;     // kappa / omega_m
    bool unresolved_sideband = false;
};

// Advisory only: never throws.
ValidityReport validity_check(const SystemParams& p, const DerivedParams& d,
                              double photon_number);

}  // namespace optomech
