#pragma once

#include "optomech/steadystate.hpp"

namespace optomech {

// Stationary 6x6 symmetric correlation matrix of the fluctuation quadratures,
// in units where the zero-point variance is 1/2.
struct CovarianceMatrix {
    Mat6 v = Mat6::Zero();
};

// Direct dense solve of A V + V A^T = -D via Kronecker-sum vectorization.
// Throws NoStationaryState when A is not strictly stable.
CovarianceMatrix solve_lyapunov(const Mat6& a, const Mat6& d);

// Dynamical route to the same stationary matrix: integrates
// dV/dt = A V + V A^T + D until |dV/dt|_max < 1e-10 |D|_max. Throws
// NumericalError on non-convergence within t_end. Kept as an independent
// cross-check of solve_lyapunov.
CovarianceMatrix integrate_cm(const Mat6& a, const Mat6& d, double t_end, double dt);

// -10 log10(sigma / (1/2)). Throws NumericalError for sigma <= 0.
double squeezing_db(double variance);

// BEC-membrane logarithmic negativity (natural log) from the (q,p)x(Q,P)
// 4x4 reduction of V.
double logarithmic_negativity(const Mat6& v);

// Symplectic eigenvalues of a two-mode covariance matrix; physical states
// have both >= 1/2.
std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& v);

struct FluctuationObservables {
    double sigma_q = 0.0;  // V33
    double sigma_Q = 0.0;  // V55
    double s_q_db = 0.0;
    double s_Q_db = 0.0;
    double e_n = 0.0;
};

// Full pipeline at a stable steady-state point: linearize, solve Lyapunov,
// extract variances, squeezing degrees, and entanglement.
FluctuationObservables observables_at(const SystemParams& p, const DerivedParams& d,
                                      const BranchPoint& bp);

}  // namespace optomech
