#include "optomech/meanfield.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace optomech {

namespace {

template <std::size_t N>
bool finite(const std::array<double, N>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

template <std::size_t N, typename Rhs>
std::array<double, N> rk4_step(const Rhs& rhs, const std::array<double, N>& y, double dt) {
    std::array<double, N> k1 = rhs(y), y2, y3, y4;
    for (std::size_t i = 0; i < N; ++i) y2[i] = y[i] + 0.5 * dt * k1[i];
    std::array<double, N> k2 = rhs(y2);
    for (std::size_t i = 0; i < N; ++i) y3[i] = y[i] + 0.5 * dt * k2[i];
    std::array<double, N> k3 = rhs(y3);
    for (std::size_t i = 0; i < N; ++i) y4[i] = y[i] + dt * k3[i];
    std::array<double, N> k4 = rhs(y4);
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

MeanFieldState unpack_full(const std::array<double, 6>& y) {
    return {y[0], y[1], y[2], y[3], y[4], y[5]};
}

}  // namespace

std::array<double, 6> rhs_full(const SystemParams& p, const DerivedParams& d,
                               const MeanFieldState& s) {
    const double delta = effective_detuning(p, d, s);
    const double intensity = s.photon_number();
    std::array<double, 6> dy;
    dy[0] = -p.kappa * s.alpha_re + delta * s.alpha_im - p.eta;
    dy[1] = -delta * s.alpha_re - p.kappa * s.alpha_im;
    dy[2] = p.omega_m * s.p_bar;
    dy[3] = -(p.omega_m + 2.0 * p.xi2 * intensity) * s.q_bar + p.xi1 * intensity -
            p.gamma_m * s.p_bar;
    dy[4] = d.omega_c * s.P_bar - p.gamma_c * s.Q_bar;
    dy[5] = -d.omega_c * s.Q_bar - d.zeta * intensity - p.gamma_c * s.P_bar;
    if (!finite(dy)) {
        std::ostringstream os;
        os << "rhs_full: non-finite derivative at state alpha=(" << s.alpha_re << ","
           << s.alpha_im << ") q=" << s.q_bar << " p=" << s.p_bar << " Q=" << s.Q_bar
           << " P=" << s.P_bar;
        throw NumericalError(os.str());
    }
    return dy;
}

std::complex<double> adiabatic_field(const SystemParams& p, const DerivedParams& d,
                                     double q, double Q) {
    const double delta = p.delta_c + d.zeta * Q - p.xi1 * q + p.xi2 * q * q;
    return -p.eta / std::complex<double>(p.kappa, delta);
}

std::array<double, 4> rhs_adiabatic(const SystemParams& p, const DerivedParams& d,
                                    const AdiabaticState& s) {
    const double intensity = std::norm(adiabatic_field(p, d, s.q, s.Q));
    std::array<double, 4> dy;
    dy[0] = s.v_q;
    dy[1] = -p.gamma_m * s.v_q - p.omega_m * (p.omega_m + 2.0 * p.xi2 * intensity) * s.q +
            p.xi1 * p.omega_m * intensity;
    dy[2] = s.v_Q;
    dy[3] = -2.0 * p.gamma_c * s.v_Q -
            (d.omega_c * d.omega_c + p.gamma_c * p.gamma_c) * s.Q -
            d.zeta * d.omega_c * intensity;
    return dy;
}

Trajectory integrate(const SystemParams& p, const DerivedParams& d,
                     const TrajectoryConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.t_end >= cfg.dt) || cfg.sample_stride < 1) {
        throw ConfigError("integrate: dt > 0, t_end >= dt, sample_stride >= 1 required");
    }
    const long n_steps = std::lround(std::ceil(cfg.t_end / cfg.dt));

    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(n_steps / cfg.sample_stride + 2));

    auto sample = [&](double t, const MeanFieldState& s) {
        if (!s.finite()) throw NumericalError("integrate: non-finite state mid-run");
        traj.times.push_back(t);
        traj.states.push_back(s);
        traj.photon_numbers.push_back(s.photon_number());
    };

    if (cfg.model == MeanFieldModel::full) {
        // Explicit-integrator stability guard on the linearization at start.
        const Mat6 a0 = drift_matrix(p, d, cfg.initial);
        const auto eigs = Eigen::EigenSolver<Mat6>(a0, false).eigenvalues();
        double lam_max = 0.0;
        for (int i = 0; i < 6; ++i) lam_max = std::max(lam_max, std::abs(eigs(i)));
        if (cfg.dt * lam_max >= 2.5) {
            std::ostringstream os;
            os << "integrate: dt*|lambda_max| = " << cfg.dt * lam_max
               << " >= 2.5; reduce dt below " << 2.5 / lam_max;
            throw NumericalError(os.str());
        }
        std::array<double, 6> y = {cfg.initial.alpha_re, cfg.initial.alpha_im,
                                   cfg.initial.q_bar,    cfg.initial.p_bar,
                                   cfg.initial.Q_bar,    cfg.initial.P_bar};
        auto rhs = [&](const std::array<double, 6>& v) {
            return rhs_full(p, d, unpack_full(v));
        };
        sample(0.0, unpack_full(y));
        for (long k = 1; k <= n_steps; ++k) {
            y = rk4_step(rhs, y, cfg.dt);
            if (k % cfg.sample_stride == 0 || k == n_steps) {
                sample(k * cfg.dt, unpack_full(y));
            }
        }
    } else {
        const double omega_c_eff =
            std::hypot(d.omega_c, p.gamma_c);
        if (cfg.dt * omega_c_eff >= 2.5) {
            throw NumericalError("integrate: adiabatic dt too large for the Bogoliubov scale");
        }
        AdiabaticState s{cfg.initial.q_bar, p.omega_m * cfg.initial.p_bar,
                         cfg.initial.Q_bar,
                         d.omega_c * cfg.initial.P_bar - p.gamma_c * cfg.initial.Q_bar};
        std::array<double, 4> y = {s.q, s.v_q, s.Q, s.v_Q};
        auto rhs = [&](const std::array<double, 4>& v) {
            return rhs_adiabatic(p, d, AdiabaticState{v[0], v[1], v[2], v[3]});
        };
        auto to_state = [&](const std::array<double, 4>& v) {
            const auto alpha = adiabatic_field(p, d, v[0], v[2]);
            MeanFieldState st;
            st.alpha_re = alpha.real();
            st.alpha_im = alpha.imag();
            st.q_bar = v[0];
            st.p_bar = v[1] / p.omega_m;
            st.Q_bar = v[2];
            st.P_bar = (v[3] + p.gamma_c * v[2]) / d.omega_c;
            return st;
        };
        sample(0.0, to_state(y));
        for (long k = 1; k <= n_steps; ++k) {
            y = rk4_step(rhs, y, cfg.dt);
            if (k % cfg.sample_stride == 0 || k == n_steps) {
                sample(k * cfg.dt, to_state(y));
            }
        }
    }
    return traj;
}

EffectiveFrequencies effective_frequencies(const SystemParams& p, const DerivedParams& d,
                                           double photon_number) {
    EffectiveFrequencies ef;
    ef.omega_c_eff = std::hypot(d.omega_c, p.gamma_c);
    const double radicand = p.omega_m * (p.omega_m + 2.0 * p.xi2 * photon_number);
    if (radicand < 0.0) {
        ef.softening = true;
        ef.omega_m_eff = 0.0;
    } else {
        ef.omega_m_eff = std::sqrt(radicand);
    }
    return ef;
}

double estimate_oscillation_frequency(const std::vector<double>& times,
                                      const std::vector<double>& values) {
    if (times.size() != values.size() || times.size() < 4) return 0.0;
    const std::size_t start = times.size() / 2;

    double mean = 0.0;
    for (std::size_t i = start; i < values.size(); ++i) mean += values[i];
    mean /= static_cast<double>(values.size() - start);

    std::vector<double> crossings;
    for (std::size_t i = start + 1; i < values.size(); ++i) {
        const double a = values[i - 1] - mean;
        const double b = values[i] - mean;
        if (a == 0.0) continue;
        if ((a > 0.0) != (b > 0.0)) {
            const double frac = a / (a - b);
            crossings.push_back(times[i - 1] + frac * (times[i] - times[i - 1]));
        }
    }
    if (crossings.size() < 2) return 0.0;
    const double mean_interval =
        (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
    // Successive zero crossings are half-periods.
    return M_PI / mean_interval;
}

}  // namespace optomech
