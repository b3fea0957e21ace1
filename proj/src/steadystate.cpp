#include "optomech/steadystate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace optomech {

namespace {

// Residual whose roots are the steady-state photon numbers.
double root_function(const SystemParams& p, const DerivedParams& d, double delta_c,
                     double intensity) {
    const auto disp = closed_form_displacements(p, d, intensity);
    const double delta = delta_c + d.zeta * disp.Q_bar - p.xi1 * disp.q_bar +
                         p.xi2 * disp.q_bar * disp.q_bar;
    return intensity * (delta * delta + p.kappa * p.kappa) - p.eta * p.eta;
}

double bisect(const SystemParams& p, const DerivedParams& d, double delta_c, double lo,
              double hi, double f_lo) {
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= Tolerances::root_bisection_rel * std::max(1.0, mid)) return mid;
        const double f_mid = root_function(p, d, delta_c, mid);
        if (f_mid == 0.0) return mid;
        if ((f_lo < 0.0) == (f_mid < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Displacements closed_form_displacements(const SystemParams& p, const DerivedParams& d,
                                        double intensity) {
    const double denom = p.omega_m + 2.0 * p.xi2 * intensity;
    if (denom == 0.0) {
        throw SofteningPoleError("closed_form_displacements: softening pole at I = " +
                                 std::to_string(intensity));
    }
    Displacements disp;
    disp.q_bar = p.xi1 * intensity / denom;
    disp.p_bar = 0.0;
    disp.Q_bar = -d.zeta * d.omega_c * intensity /
                 (d.omega_c * d.omega_c + p.gamma_c * p.gamma_c);
    disp.P_bar = p.gamma_c / d.omega_c * disp.Q_bar;
    return disp;
}

MeanFieldState steady_state_at(const SystemParams& p, const DerivedParams& d,
                               double delta_c, double intensity) {
    const auto disp = closed_form_displacements(p, d, intensity);
    const double delta = delta_c + d.zeta * disp.Q_bar - p.xi1 * disp.q_bar +
                         p.xi2 * disp.q_bar * disp.q_bar;
    const double denom = delta * delta + p.kappa * p.kappa;
    MeanFieldState s;
    s.alpha_re = -p.eta * p.kappa / denom;
    s.alpha_im = p.eta * delta / denom;
    s.q_bar = disp.q_bar;
    s.p_bar = disp.p_bar;
    s.Q_bar = disp.Q_bar;
    s.P_bar = disp.P_bar;
    return s;
}

std::vector<BranchPoint> find_branches(const SystemParams& p, const DerivedParams& d,
                                       double delta_c, int grid_points) {
    const double i_max = 1.05 * p.eta * p.eta / (p.kappa * p.kappa);

    std::vector<BranchPoint> out;
    auto emit = [&](double intensity) {
        SystemParams pt = p;
        pt.delta_c = delta_c;
        BranchPoint bp;
        bp.delta_c = delta_c;
        bp.photon_number = intensity;
        bp.state = steady_state_at(pt, d, delta_c, intensity);
        const auto verdict = classify_stability(drift_matrix(pt, d, bp.state));
        bp.stable = verdict.stable;
        bp.marginal = verdict.marginal;
        bp.margin = verdict.margin;
        out.push_back(bp);
    };

    if (p.eta == 0.0) {
        emit(0.0);
        return out;
    }

    // Hybrid log+linear grid; split at the softening pole when inside range.
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(grid_points) + 4);
    const int half = grid_points / 2;
    for (int i = 0; i <= half; ++i) {
        grid.push_back(i_max * i / half);
    }
    const double log_lo = std::log(i_max * 1e-12), log_hi = std::log(i_max);
    for (int i = 0; i < half; ++i) {
        grid.push_back(std::exp(log_lo + (log_hi - log_lo) * i / (half - 1.0)));
    }
    double pole = -1.0;
    if (p.xi2 < 0.0) {
        pole = -p.omega_m / (2.0 * p.xi2);
        if (pole > 0.0 && pole < i_max) {
            grid.push_back(pole * (1.0 - 1e-9));
            grid.push_back(pole * (1.0 + 1e-9));
        } else {
            pole = -1.0;
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (pole > 0.0) {
        grid.erase(std::remove_if(grid.begin(), grid.end(),
                                  [&](double x) {
                                      return std::abs(x - pole) < 1e-10 * pole;
                                  }),
                   grid.end());
    }

    std::vector<double> roots;
    double prev_x = grid[0];
    double prev_f = root_function(p, d, delta_c, prev_x);
    if (prev_f == 0.0) roots.push_back(prev_x);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double x = grid[i];
        if (pole > 0.0 && prev_x < pole && pole < x) {
            prev_x = x;
            prev_f = root_function(p, d, delta_c, x);
            if (prev_f == 0.0) roots.push_back(x);
            continue;
        }
        const double f = root_function(p, d, delta_c, x);
        if (f == 0.0) {
            roots.push_back(x);
        } else if ((prev_f < 0.0) != (f < 0.0)) {
            roots.push_back(bisect(p, d, delta_c, prev_x, x, prev_f));
        }
        prev_x = x;
        prev_f = f;
    }

    std::sort(roots.begin(), roots.end());
    const double dedupe = Tolerances::root_dedupe_rel * p.eta * p.eta / (p.kappa * p.kappa);
    std::vector<double> unique_roots;
    for (double r : roots) {
        if (unique_roots.empty() || r - unique_roots.back() > dedupe) {
            unique_roots.push_back(r);
        }
    }
    if (unique_roots.empty()) {
        throw NumericalError("find_branches: no roots found (internal inconsistency)");
    }
    for (double r : unique_roots) emit(r);
    return out;
}

const BranchPoint* BranchSweep::branch1(std::size_t i) const {
    for (const auto& bp : points[i]) {
        if (bp.branch_id == 1) return &bp;
    }
    return nullptr;
}

namespace {

// Nearest-neighbor continuation of branch ids from one detuning to the next.
void assign_branch_ids(BranchSweep& sweep) {
    int next_id = 1;
    for (std::size_t i = 0; i < sweep.points.size(); ++i) {
        auto& cur = sweep.points[i];
        if (i == 0) {
            // Ids in order of increasing I at the first grid point.
            for (auto& bp : cur) bp.branch_id = next_id++;
            continue;
        }
        const auto& prev = sweep.points[i - 1];
        struct Pair {
            double dist;
            std::size_t prev_idx, cur_idx;
        };
        std::vector<Pair> pairs;
        for (std::size_t a = 0; a < prev.size(); ++a) {
            for (std::size_t b = 0; b < cur.size(); ++b) {
                pairs.push_back({std::abs(prev[a].photon_number - cur[b].photon_number),
                                 a, b});
            }
        }
        std::sort(pairs.begin(), pairs.end(),
                  [](const Pair& x, const Pair& y) { return x.dist < y.dist; });
        std::vector<bool> prev_used(prev.size(), false), cur_used(cur.size(), false);
        for (const auto& pr : pairs) {
            if (prev_used[pr.prev_idx] || cur_used[pr.cur_idx]) continue;
            cur[pr.cur_idx].branch_id = prev[pr.prev_idx].branch_id;
            prev_used[pr.prev_idx] = true;
            cur_used[pr.cur_idx] = true;
        }
        for (std::size_t b = 0; b < cur.size(); ++b) {
            if (!cur_used[b]) cur[b].branch_id = next_id++;
        }
    }
}

void collect_folds(BranchSweep& sweep) {
    sweep.max_count = 0;
    for (const auto& pts : sweep.points) {
        sweep.max_count = std::max(sweep.max_count, static_cast<int>(pts.size()));
    }
    for (std::size_t i = 1; i < sweep.points.size(); ++i) {
        const int a = static_cast<int>(sweep.points[i - 1].size());
        const int b = static_cast<int>(sweep.points[i].size());
        if (a != b) {
            sweep.folds.push_back({sweep.delta_grid[i - 1], sweep.delta_grid[i], a, b});
        }
    }
}

}  // namespace

BranchSweep sweep_detuning_serial(const SystemParams& p, const DerivedParams& d,
                                  double delta_min, double delta_max, int n_points) {
    return sweep_detuning(p, d, delta_min, delta_max, n_points, 1);
}

BranchSweep sweep_detuning(const SystemParams& p, const DerivedParams& d,
                           double delta_min, double delta_max, int n_points,
                           int threads) {
    if (n_points < 2) throw ConfigError("sweep_detuning: n_points >= 2 required");
    if (!(delta_min < delta_max)) {
        throw ConfigError("sweep_detuning: delta_min < delta_max required");
    }
    BranchSweep sweep;
    sweep.delta_grid.resize(n_points);
    for (int i = 0; i < n_points; ++i) {
        sweep.delta_grid[i] = delta_min + (delta_max - delta_min) * i / (n_points - 1.0);
    }
    sweep.points.resize(n_points);

    if (threads == 1) {
        for (int i = 0; i < n_points; ++i) {
            sweep.points[i] = find_branches(p, d, sweep.delta_grid[i]);
        }
    } else {
        std::exception_ptr err;
#ifdef _OPENMP
        if (threads > 1) omp_set_num_threads(threads);
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < n_points; ++i) {
            try {
                sweep.points[i] = find_branches(p, d, sweep.delta_grid[i]);
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    }

    assign_branch_ids(sweep);
    collect_folds(sweep);
    return sweep;
}

}  // namespace optomech
