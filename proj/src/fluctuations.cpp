#include "optomech/fluctuations.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace optomech {

CovarianceMatrix solve_lyapunov(const Mat6& a, const Mat6& d) {
    const auto verdict = classify_stability(a);
    if (!verdict.stable) {
        throw NoStationaryState("solve_lyapunov: drift matrix is not strictly stable");
    }
    // Scale to O(1) for conditioning; V is invariant under (A,D) -> (A,D)/s.
    double s = a.cwiseAbs().maxCoeff();
    if (s == 0.0) s = 1.0;
    const Mat6 as = a / s;
    const Mat6 ds = d / s;

    // vec(AV) = (I (x) A) vec(V), vec(V A^T) = (A (x) I) vec(V), column-major.
    Eigen::Matrix<double, 36, 36> k = Eigen::Matrix<double, 36, 36>::Zero();
    for (int i = 0; i < 6; ++i) {
        k.block<6, 6>(6 * i, 6 * i) += as;
        for (int j = 0; j < 6; ++j) {
            k.block<6, 6>(6 * i, 6 * j) += as(i, j) * Mat6::Identity();
        }
    }
    Eigen::Matrix<double, 36, 1> rhs;
    for (int j = 0; j < 6; ++j) {
        for (int i = 0; i < 6; ++i) rhs(6 * j + i) = -ds(i, j);
    }
    const Eigen::Matrix<double, 36, 1> x = k.partialPivLu().solve(rhs);
    CovarianceMatrix cm;
    for (int j = 0; j < 6; ++j) {
        for (int i = 0; i < 6; ++i) cm.v(i, j) = x(6 * j + i);
    }
    cm.v = 0.5 * (cm.v + cm.v.transpose()).eval();
    return cm;
}

CovarianceMatrix integrate_cm(const Mat6& a, const Mat6& d, double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw ConfigError("integrate_cm: dt > 0 and t_end > 0 required");
    }
    const double d_scale = d.cwiseAbs().maxCoeff();
    const double tol = 1e-10 * (d_scale > 0.0 ? d_scale : 1.0);

    Mat6 v = Mat6::Zero();
    auto deriv = [&](const Mat6& w) -> Mat6 { return a * w + w * a.transpose() + d; };

    const long n_steps = std::lround(std::ceil(t_end / dt));
    for (long k = 0; k < n_steps; ++k) {
        const Mat6 k1 = deriv(v);
        if (k1.cwiseAbs().maxCoeff() < tol) {
            CovarianceMatrix cm;
            cm.v = 0.5 * (v + v.transpose()).eval();
            return cm;
        }
        const Mat6 k2 = deriv(v + 0.5 * dt * k1);
        const Mat6 k3 = deriv(v + 0.5 * dt * k2);
        const Mat6 k4 = deriv(v + dt * k3);
        v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!v.allFinite()) throw NumericalError("integrate_cm: diverged");
    }
    throw NumericalError("integrate_cm: no convergence within t_end");
}

double squeezing_db(double variance) {
    if (!(variance > 0.0)) {
        throw NumericalError("squeezing_db: non-positive variance (unphysical V)");
    }
    return -10.0 * std::log10(2.0 * variance);
}

double logarithmic_negativity(const Mat6& v) {
    const Eigen::Matrix2d b = v.block<2, 2>(2, 2);
    const Eigen::Matrix2d bp = v.block<2, 2>(4, 4);
    const Eigen::Matrix2d c = v.block<2, 2>(2, 4);
    const double det_v = v.block<4, 4>(2, 2).determinant();
    const double sigma = b.determinant() + bp.determinant() - 2.0 * c.determinant();

    double disc = sigma * sigma - 4.0 * det_v;
    const double scale = std::max(sigma * sigma, 1.0);
    if (disc < 0.0) {
        if (disc < -Tolerances::en_radicand_slack * scale) {
            throw NumericalError("logarithmic_negativity: unphysical reduced covariance");
        }
        disc = 0.0;
    }
    double inner = sigma - std::sqrt(disc);
    if (inner < 0.0) {
        if (inner < -Tolerances::en_radicand_slack * std::max(std::abs(sigma), 1.0)) {
            throw NumericalError("logarithmic_negativity: negative symplectic radicand");
        }
        inner = 0.0;
    }
    const double eta_minus = std::sqrt(0.5 * inner);
    if (eta_minus <= 0.0) {
        throw NumericalError("logarithmic_negativity: vanishing symplectic eigenvalue");
    }
    return std::max(0.0, -std::log(2.0 * eta_minus));
}

std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& v) {
    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = 1.0;
    omega(3, 2) = -1.0;
    const Eigen::Matrix4d m = -(omega * v) * (omega * v);
    const Eigen::Vector4cd ev = Eigen::EigenSolver<Eigen::Matrix4d>(m, false).eigenvalues();
    std::array<double, 4> nu;
    for (int i = 0; i < 4; ++i) nu[i] = std::sqrt(std::max(ev(i).real(), 0.0));
    std::sort(nu.begin(), nu.end());
    // Eigenvalues come in duplicate pairs.
    return {0.5 * (nu[0] + nu[1]), 0.5 * (nu[2] + nu[3])};
}

FluctuationObservables observables_at(const SystemParams& p, const DerivedParams& d,
                                      const BranchPoint& bp) {
    if (!bp.stable) {
        throw NoStationaryState("observables_at: branch point is unstable");
    }
    SystemParams pt = p;
    pt.delta_c = bp.delta_c;
    const Linearization lin = linearize(pt, d, bp.state);
    // Rates span several decades; solve in kappa units.
    const CovarianceMatrix cm =
        solve_lyapunov(lin.a_matrix / p.kappa, lin.d_matrix / p.kappa);

    FluctuationObservables obs;
    obs.sigma_q = cm.v(2, 2);
    obs.sigma_Q = cm.v(4, 4);
    obs.s_q_db = squeezing_db(obs.sigma_q);
    obs.s_Q_db = squeezing_db(obs.sigma_Q);
    obs.e_n = logarithmic_negativity(cm.v);
    return obs;
}

}  // namespace optomech
