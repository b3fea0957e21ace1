#pragma once

#include <complex>

#include "optomech/params.hpp"

namespace optomech {

// Classical phase-space point (alpha, q, p, Q, P), all dimensionless.
struct MeanFieldState {
    double alpha_re = 0.0;
    double alpha_im = 0.0;
    double q_bar = 0.0;
    double p_bar = 0.0;
    double Q_bar = 0.0;
    double P_bar = 0.0;

    double photon_number() const { return alpha_re * alpha_re + alpha_im * alpha_im; }
    std::complex<double> alpha() const { return {alpha_re, alpha_im}; }
    bool finite() const;
};

// Drift/diffusion pair of the linearized fluctuation dynamics at a mean-field
// point. Row/column order: (dX, dY, dq, dp, dQ, dP).
struct Linearization {
    Mat6 a_matrix = Mat6::Zero();
    Mat6 d_matrix = Mat6::Zero();
    double delta_eff = 0.0;  // effective detuning at the point
    double beta = 0.0;       // xi1 - 2*xi2*q_bar
    double omega_b = 0.0;    // omega_m + 2*xi2*|alpha|^2
    bool d_psd_warning = false;
};

// Delta = delta_c + zeta*Q - xi1*q + xi2*q^2.
double effective_detuning(const SystemParams& p, const DerivedParams& d,
                          const MeanFieldState& s);

Mat6 drift_matrix(const SystemParams& p, const DerivedParams& d,
                  const MeanFieldState& s);

// Noise covariance feeding the Lyapunov equation. Under the paper-literal
// convention the optical block can be indefinite; *psd_warning reports that.
Mat6 diffusion_matrix(const SystemParams& p, const DerivedParams& d,
                      bool* psd_warning = nullptr);

Linearization linearize(const SystemParams& p, const DerivedParams& d,
                        const MeanFieldState& s);

}  // namespace optomech
