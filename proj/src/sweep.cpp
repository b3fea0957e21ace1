#include "optomech/sweep.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace optomech {

std::vector<ObservablesRow> sweep_observables_serial(const SystemParams& base,
                                                     ObservablesSweepConfig cfg) {
    cfg.threads = 1;
    return sweep_observables(base, cfg);
}

std::vector<ObservablesRow> sweep_observables(const SystemParams& base,
                                              const ObservablesSweepConfig& cfg) {
    if (cfg.xi2_ratios.empty()) {
        throw ConfigError("sweep_observables: at least one xi2 ratio required");
    }
    std::vector<bool> injections;
    if (cfg.injection == InjectionSelect::off || cfg.injection == InjectionSelect::both) {
        injections.push_back(false);
    }
    if (cfg.injection == InjectionSelect::on || cfg.injection == InjectionSelect::both) {
        injections.push_back(true);
    }

    std::vector<ObservablesRow> rows;
    for (double ratio : cfg.xi2_ratios) {
        SystemParams p = base;
        p.xi2 = ratio * base.xi1;
        const DerivedParams d = derive_params(p);

        // Branch identification is shared by both injection settings.
        const BranchSweep branches =
            sweep_detuning(p, d, cfg.delta_min, cfg.delta_max, cfg.n_points, cfg.threads);

        for (bool inj : injections) {
            SystemParams pi = p;
            pi.squeezing_enabled = inj;
            const std::size_t first = rows.size();
            rows.resize(first + branches.delta_grid.size());

            std::exception_ptr err;
#ifdef _OPENMP
            if (cfg.threads != 1) {
                if (cfg.threads > 1) omp_set_num_threads(cfg.threads);
            }
#pragma omp parallel for schedule(dynamic) if (cfg.threads != 1)
#endif
            for (int i = 0; i < static_cast<int>(branches.delta_grid.size()); ++i) {
                try {
                    ObservablesRow row;
                    row.delta_c_over_kappa = branches.delta_grid[i] / base.kappa;
                    row.xi2_over_xi1 = ratio;
                    row.injected = inj;
                    const BranchPoint* bp = branches.branch1(i);
                    if (bp != nullptr) {
                        row.on_branch1 = true;
                        row.photon = bp->photon_number;
                        if (bp->stable) {
                            row.obs = observables_at(pi, d, *bp);
                        }
                    }
                    rows[first + i] = row;
                } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
                    if (!err) err = std::current_exception();
                }
            }
            if (err) std::rethrow_exception(err);
        }
    }
    return rows;
}

}  // namespace optomech
