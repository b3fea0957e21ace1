#include "optomech/model.hpp"

#include <cmath>

namespace optomech {

bool MeanFieldState::finite() const {
    return std::isfinite(alpha_re) && std::isfinite(alpha_im) && std::isfinite(q_bar) &&
           std::isfinite(p_bar) && std::isfinite(Q_bar) && std::isfinite(P_bar);
}

double effective_detuning(const SystemParams& p, const DerivedParams& d,
                          const MeanFieldState& s) {
    return p.delta_c + d.zeta * s.Q_bar - p.xi1 * s.q_bar + p.xi2 * s.q_bar * s.q_bar;
}

Mat6 drift_matrix(const SystemParams& p, const DerivedParams& d,
                  const MeanFieldState& s) {
    if (!s.finite()) throw NumericalError("drift_matrix: non-finite mean-field state");
    const double delta = effective_detuning(p, d, s);
    const double beta = p.xi1 - 2.0 * p.xi2 * s.q_bar;
    const double omega_b = p.omega_m + 2.0 * p.xi2 * s.photon_number();
    const double s2 = std::sqrt(2.0);
    const double ar = s.alpha_re, ai = s.alpha_im;

    Mat6 a = Mat6::Zero();
    a(0, 0) = -p.kappa;
    a(0, 1) = delta;
    a(0, 2) = -s2 * ai * beta;
    a(0, 4) = s2 * ai * d.zeta;
    a(1, 0) = -delta;
    a(1, 1) = -p.kappa;
    a(1, 2) = s2 * ar * beta;
    a(1, 4) = -s2 * ar * d.zeta;
    a(2, 3) = p.omega_m;
    a(3, 0) = s2 * ar * beta;
    a(3, 1) = s2 * ai * beta;
    a(3, 2) = -omega_b;
    a(3, 3) = -p.gamma_m;
    a(4, 4) = -p.gamma_c;
    a(4, 5) = d.omega_c;
    a(5, 0) = -s2 * ar * d.zeta;
    a(5, 1) = -s2 * ai * d.zeta;
    a(5, 4) = -d.omega_c;
    a(5, 5) = -p.gamma_c;
    return a;
}

Mat6 diffusion_matrix(const SystemParams& p, const DerivedParams& d,
                      bool* psd_warning) {
    Mat6 dm = Mat6::Zero();
    dm(0, 0) = p.kappa;
    dm(1, 1) = p.kappa;
    dm(3, 3) = p.gamma_m * (2.0 * d.n_m + 1.0);
    dm(4, 4) = p.gamma_c * (2.0 * d.n_c + 1.0);
    dm(5, 5) = p.gamma_c * (2.0 * d.n_c + 1.0);
    bool warn = false;
    if (p.squeezing_enabled) {
        const double half = p.n_s + 0.5;
        dm(0, 0) = 2.0 * p.kappa * (half + d.m_s_re);
        dm(0, 1) = dm(1, 0) = 2.0 * p.kappa * d.m_s_im;
        if (p.d_convention == DConvention::standard) {
            dm(1, 1) = 2.0 * p.kappa * (half - d.m_s_re);
        } else {
            // Identical diagonal entries as printed in the source model;
            // indefinite whenever |M_s| exceeds N_s + 1/2 + M_s^(R).
            dm(1, 1) = 2.0 * p.kappa * (half + d.m_s_re);
        }
        const double ms_mag = std::hypot(d.m_s_re, d.m_s_im);
        const double min_eig = 0.5 * (dm(0, 0) + dm(1, 1)) -
                               std::hypot(0.5 * (dm(0, 0) - dm(1, 1)), dm(0, 1));
        warn = min_eig < -1e-12 * 2.0 * p.kappa * (half + ms_mag);
    }
    if (psd_warning) *psd_warning = warn;
    return dm;
}

Linearization linearize(const SystemParams& p, const DerivedParams& d,
                        const MeanFieldState& s) {
    Linearization lin;
    lin.delta_eff = effective_detuning(p, d, s);
    lin.beta = p.xi1 - 2.0 * p.xi2 * s.q_bar;
    lin.omega_b = p.omega_m + 2.0 * p.xi2 * s.photon_number();
    lin.a_matrix = drift_matrix(p, d, s);
    lin.d_matrix = diffusion_matrix(p, d, &lin.d_psd_warning);
    return lin;
}

}  // namespace optomech
