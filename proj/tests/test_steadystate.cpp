#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "optomech/steadystate.hpp"

#include "test_support.hpp"

using namespace optomech;
using testsup::paper_params;

namespace {

double residual(const SystemParams& p, const DerivedParams& d, const BranchPoint& bp) {
    SystemParams pt = p;
    pt.delta_c = bp.delta_c;
    const double delta = effective_detuning(pt, d, bp.state);
    return std::abs(bp.photon_number * (delta * delta + p.kappa * p.kappa) -
                    p.eta * p.eta);
}

}  // namespace

TEST_CASE("closed-form displacements") {
    const SystemParams p = paper_params();
    const DerivedParams d = derive_params(p);

    const auto zero = closed_form_displacements(p, d, 0.0);
    CHECK(zero.q_bar == 0.0);
    CHECK(zero.p_bar == 0.0);
    CHECK(zero.Q_bar == 0.0);
    CHECK(zero.P_bar == 0.0);

    // xi2 = 0: q = xi1*I/omega_m
    const auto disp = closed_form_displacements(p, d, 1000.0);
    CHECK(disp.q_bar == doctest::Approx(p.xi1 * 1000.0 / p.omega_m).epsilon(1e-14));
    CHECK(disp.q_bar == doctest::Approx(4084.0704496667307).epsilon(1e-12));
    CHECK(disp.P_bar == doctest::Approx(p.gamma_c / d.omega_c * disp.Q_bar).epsilon(1e-14));

    // gamma_c -> 0 limit: Q = -zeta*I/omega_c, P = 0
    SystemParams p0 = p;
    p0.gamma_c = 1e-12;
    const auto undamped = closed_form_displacements(p0, d, 1000.0);
    CHECK(undamped.Q_bar == doctest::Approx(-d.zeta * 1000.0 / d.omega_c).epsilon(1e-12));
    CHECK(std::abs(undamped.P_bar) < 1e-12 * std::abs(undamped.Q_bar));
}

TEST_CASE("softening pole raises a typed error") {
    SystemParams p = paper_params();
    p.xi2 = -0.005 * p.xi1;
    const DerivedParams d = derive_params(p);
    const double pole = -p.omega_m / (2.0 * p.xi2);
    CHECK_THROWS_AS(closed_form_displacements(p, d, pole), SofteningPoleError);
}

TEST_CASE("find_branches: no drive gives the single root I = 0") {
    SystemParams p = paper_params();
    p.eta = 0.0;
    const DerivedParams d = derive_params(p);
    const auto branches = find_branches(p, d, p.delta_c);
    REQUIRE(branches.size() == 1);
    CHECK(branches[0].photon_number == 0.0);
}

TEST_CASE("find_branches: root counts across the bistability threshold") {
    const SystemParams p = paper_params();
    const DerivedParams d = derive_params(p);
    CHECK(find_branches(p, d, 30.0 * p.kappa).size() == 1);
    CHECK(find_branches(p, d, 80.0 * p.kappa).size() == 3);
}

TEST_CASE("find_branches: frozen roots at delta_c = 100k") {
    const SystemParams p = paper_params();
    const DerivedParams d = derive_params(p);
    const auto branches = find_branches(p, d, 100.0 * p.kappa);
    REQUIRE(branches.size() == 3);
    CHECK(branches[0].photon_number == doctest::Approx(1.071800266804936).epsilon(1e-8));
    CHECK(branches[1].photon_number == doctest::Approx(25.151417265702271).epsilon(1e-8));
    CHECK(branches[2].photon_number == doctest::Approx(36.588286487409711).epsilon(1e-8));
    CHECK(branches[0].stable);
    CHECK_FALSE(branches[1].stable);
    CHECK(branches[2].stable);
    for (const auto& bp : branches) {
        CHECK(residual(p, d, bp) <= 1e-8 * p.eta * p.eta);
    }
}

TEST_CASE("find_branches: frozen single root at delta_c = 50k") {
    const SystemParams p = paper_params();
    const DerivedParams d = derive_params(p);
    const auto branches = find_branches(p, d, 50.0 * p.kappa);
    REQUIRE(branches.size() == 1);
    CHECK(branches[0].photon_number == doctest::Approx(22.340027027440108).epsilon(1e-8));
}

TEST_CASE("find_branches: residual bound holds with xi2 < 0 near the pole") {
    SystemParams p = paper_params();
    p.xi2 = -0.005 * p.xi1;
    const DerivedParams d = derive_params(p);
    for (double dk : {50.0, 80.0, 110.0}) {
        for (const auto& bp : find_branches(p, d, dk * p.kappa)) {
            CHECK(residual(p, d, bp) <= 1e-8 * p.eta * p.eta);
        }
    }
}

TEST_CASE("steady_state_at reproduces the Lorentzian optical amplitude") {
    const SystemParams p = paper_params();
    const DerivedParams d = derive_params(p);
    const auto branches = find_branches(p, d, 50.0 * p.kappa);
    const auto& s = branches[0].state;
    CHECK(s.photon_number() == doctest::Approx(branches[0].photon_number).epsilon(1e-10));
    CHECK(s.alpha_re < 0.0);  // -eta*kappa/(Delta^2+kappa^2)
    CHECK(s.p_bar == 0.0);
}

TEST_CASE("sweep: single-valued below the bistability threshold") {
    const SystemParams p = paper_params();
    const DerivedParams d = derive_params(p);
    // The fold opens at 60 kappa exactly; stay just below it.
    const auto sweep = sweep_detuning_serial(p, d, 0.0, 59.0 * p.kappa, 60);
    for (const auto& pts : sweep.points) CHECK(pts.size() == 1);
    CHECK(sweep.max_count == 1);
    CHECK(sweep.folds.empty());
}

TEST_CASE("sweep: root count changes in steps of +-2 and folds are recorded") {
    const SystemParams p = paper_params();
    const DerivedParams d = derive_params(p);
    const auto sweep = sweep_detuning_serial(p, d, 0.0, 120.0 * p.kappa, 121);
    CHECK(sweep.max_count == 3);
    REQUIRE(!sweep.folds.empty());
    for (const auto& f : sweep.folds) {
        CHECK(std::abs(f.count_hi - f.count_lo) == 2);
    }
    // First fold near 60 kappa.
    CHECK(sweep.folds.front().delta_hi / p.kappa > 55.0);
    CHECK(sweep.folds.front().delta_hi / p.kappa < 65.0);
}

TEST_CASE("sweep: branch 1 continues the unique low-detuning solution") {
    const SystemParams p = paper_params();
    const DerivedParams d = derive_params(p);
    const auto sweep = sweep_detuning_serial(p, d, 0.0, 120.0 * p.kappa, 121);
    for (std::size_t i = 0; i < sweep.points.size(); ++i) {
        const BranchPoint* bp = sweep.branch1(i);
        REQUIRE(bp != nullptr);
        if (i > 0) {
            const BranchPoint* prev = sweep.branch1(i - 1);
            // Continuity: photon number changes smoothly along branch 1.
            CHECK(std::abs(bp->photon_number - prev->photon_number) <
                  0.2 * p.eta * p.eta / (p.kappa * p.kappa));
        }
    }
    // Branch 1 is the high-photon branch once the fold opens.
    const auto& last = sweep.points.back();
    const BranchPoint* b1 = sweep.branch1(sweep.points.size() - 1);
    for (const auto& bp : last) CHECK(b1->photon_number >= bp.photon_number);
}

TEST_CASE("sweep: first count-5 detuning decreases with |xi2|") {
    const DerivedParams d = derive_params(paper_params());
    auto first5 = [&](double ratio) {
        SystemParams p = paper_params();
        p.xi2 = ratio * p.xi1;
        // The -0.002 threshold sits near 280 kappa; scan generously past it.
        const auto sweep = sweep_detuning_serial(p, d, 0.0, 300.0 * p.kappa, 151);
        for (std::size_t i = 0; i < sweep.points.size(); ++i) {
            if (sweep.points[i].size() >= 5) return sweep.delta_grid[i];
        }
        return -1.0;
    };
    const double f_002 = first5(-0.002);
    const double f_005 = first5(-0.005);
    REQUIRE(f_002 > 0.0);
    REQUIRE(f_005 > 0.0);
    CHECK(f_005 < f_002);
}

TEST_CASE("sweep: parallel path matches the serial reference exactly") {
    const SystemParams p = paper_params();
    const DerivedParams d = derive_params(p);
    const auto serial = sweep_detuning_serial(p, d, 0.0, 120.0 * p.kappa, 61);
    const auto parallel = sweep_detuning(p, d, 0.0, 120.0 * p.kappa, 61, 0);
    REQUIRE(serial.points.size() == parallel.points.size());
    for (std::size_t i = 0; i < serial.points.size(); ++i) {
        REQUIRE(serial.points[i].size() == parallel.points[i].size());
        for (std::size_t j = 0; j < serial.points[i].size(); ++j) {
            CHECK(serial.points[i][j].photon_number == parallel.points[i][j].photon_number);
            CHECK(serial.points[i][j].branch_id == parallel.points[i][j].branch_id);
            CHECK(serial.points[i][j].stable == parallel.points[i][j].stable);
        }
    }
    CHECK(serial.max_count == parallel.max_count);
}

TEST_CASE("sweep argument validation") {
    const SystemParams p = paper_params();
    const DerivedParams d = derive_params(p);
    CHECK_THROWS_AS(sweep_detuning_serial(p, d, 0.0, p.kappa, 1), ConfigError);
    CHECK_THROWS_AS(sweep_detuning_serial(p, d, p.kappa, 0.0, 10), ConfigError);
}
