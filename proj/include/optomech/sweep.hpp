#pragma once

#include <optional>
#include <vector>

#include "optomech/fluctuations.hpp"

namespace optomech {

// One row of the observables table. Rows for unstable or missing branch-1
// points keep their grid slot with obs == nullopt so CSV rows stay aligned
// across xi2 values.
struct ObservablesRow {
    double delta_c_over_kappa = 0.0;
    double xi2_over_xi1 = 0.0;
    bool injected = false;
    double photon = 0.0;
    bool on_branch1 = false;
    std::optional<FluctuationObservables> obs;
};

enum class InjectionSelect { off, on, both };

struct ObservablesSweepConfig {
    double delta_min = 0.0;          // rad/s
    double delta_max = 0.0;          // rad/s
    int n_points = 400;
    std::vector<double> xi2_ratios;  // xi2/xi1 values
    InjectionSelect injection = InjectionSelect::off;
    int threads = 0;                 // 0 = hardware default, 1 = serial reference
};

// Branch-1 fluctuation observables over the cross-product
// xi2_ratios x injection settings x detuning grid, in deterministic order
// (xi2 outer, injection next with off before on, detuning inner ascending).
std::vector<ObservablesRow> sweep_observables(const SystemParams& base,
                                              const ObservablesSweepConfig& cfg);

// Serial reference implementation, kept for testing the parallel path.
std::vector<ObservablesRow> sweep_observables_serial(const SystemParams& base,
                                                     ObservablesSweepConfig cfg);

}  // namespace optomech
