#pragma once

#include <vector>

#include "optomech/model.hpp"
#include "optomech/stability.hpp"

namespace optomech {

struct BranchPoint {
    double delta_c = 0.0;        // rad/s
    double photon_number = 0.0;  // I = |alpha|^2
    MeanFieldState state;
    bool stable = false;
    bool marginal = false;
    double margin = 0.0;  // -max Re eigenvalue of A, rad/s
    int branch_id = 0;    // assigned by sweep continuation; 0 = unassigned
};

struct Displacements {
    double q_bar = 0.0;
    double p_bar = 0.0;
    double Q_bar = 0.0;
    double P_bar = 0.0;
};

// Steady-state displacements at photon number I. Throws SofteningPoleError at
// omega_m + 2*xi2*I = 0.
Displacements closed_form_displacements(const SystemParams& p, const DerivedParams& d,
                                        double intensity);

// All real roots I >= 0 of f(I) = I*(Delta(I)^2 + kappa^2) - eta^2 at the
// given detuning, found by a pole-aware grid scan plus bisection, sorted by
// increasing I and classified for stability.
std::vector<BranchPoint> find_branches(const SystemParams& p, const DerivedParams& d,
                                       double delta_c, int grid_points = 40000);

struct FoldLocation {
    double delta_lo = 0.0;
    double delta_hi = 0.0;
    int count_lo = 0;
    int count_hi = 0;
};

struct BranchSweep {
    std::vector<double> delta_grid;                // rad/s
    std::vector<std::vector<BranchPoint>> points;  // per grid point, branch ids set
    std::vector<FoldLocation> folds;
    int max_count = 0;

    // Branch-1 point at grid index i, or nullptr if absent there.
    const BranchPoint* branch1(std::size_t i) const;
};

// Sweep over [delta_min, delta_max] with n points. branch_id is assigned by
// nearest-neighbor continuation in I; the continuation of the unique solution
// at the lowest detuning carries id 1. threads: 0 = hardware default,
// 1 = serial reference path.
BranchSweep sweep_detuning(const SystemParams& p, const DerivedParams& d,
                           double delta_min, double delta_max, int n_points,
                           int threads = 0);

// Serial reference implementation, kept for testing the parallel path.
BranchSweep sweep_detuning_serial(const SystemParams& p, const DerivedParams& d,
                                  double delta_min, double delta_max, int n_points);

// Mean-field state at a steady-state root (alpha from the Lorentzian form).
MeanFieldState steady_state_at(const SystemParams& p, const DerivedParams& d,
                               double delta_c, double intensity);

}  // namespace optomech
