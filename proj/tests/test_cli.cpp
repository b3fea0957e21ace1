#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#ifndef OPTOMECH_CLI_PATH
#error "OPTOMECH_CLI_PATH must be defined"
#endif
#ifndef OPTOMECH_CONFIG_DIR
#error "OPTOMECH_CONFIG_DIR must be defined"
#endif

namespace {

const std::string kCli = OPTOMECH_CLI_PATH;
const std::string kPaperConfig = std::string(OPTOMECH_CONFIG_DIR) + "/paper.json";

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (line.size() && line.back() == ',') fields.push_back("");
        rows.push_back(fields);
    }
    return rows;
}

std::string tmp_prefix(const std::string& tag) {
    return "/tmp/optomech_cli_" + tag;
}

}  // namespace

TEST_CASE("check subcommand exits 0 and writes a manifest") {
    const std::string prefix = tmp_prefix("check");
    CHECK(run("-c " + kPaperConfig + " -o " + prefix + " check") == 0);
    const auto manifest = nlohmann::json::parse(slurp(prefix + "_manifest.json"));
    CHECK(manifest.contains("config"));
    CHECK(manifest.contains("command"));
    CHECK(manifest.contains("code_version"));
    CHECK(manifest["config"]["kappa"].get<double>() == 8168140.899333462);
}

TEST_CASE("missing config file exits 2") {
    CHECK(run("-c /tmp/does_not_exist_optomech.json check") == 2);
}

TEST_CASE("malformed config key exits 2 and names the key") {
    const std::string bad = "/tmp/optomech_cli_bad.json";
    {
        auto j = nlohmann::json::parse(slurp(kPaperConfig));
        j["kapa_typo"] = 1.0;
        std::ofstream out(bad);
        out << j.dump();
    }
    const std::string cmd = kCli + " -c " + bad + " check 2>/tmp/optomech_cli_bad.err";
    const int rc = WEXITSTATUS(std::system(cmd.c_str()));
    CHECK(rc == 2);
    CHECK(slurp("/tmp/optomech_cli_bad.err").find("kapa_typo") != std::string::npos);
}

TEST_CASE("trajectory with --eta 0 is identically zero") {
    const std::string prefix = tmp_prefix("traj0");
    CHECK(run("-c " + kPaperConfig + " -o " + prefix +
              " trajectory --eta 0 --t-end-gamma-m-t 0.01") == 0);
    const auto rows = read_csv(prefix + "_trajectory.csv");
    REQUIRE(rows.size() > 2);
    CHECK(rows[0] == std::vector<std::string>{"t", "gamma_m_t", "alpha_re", "alpha_im",
                                              "photon", "q", "p", "Q", "P"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        for (std::size_t c = 2; c < rows[i].size(); ++c) {
            CHECK(std::stod(rows[i][c]) == 0.0);
        }
    }
}

TEST_CASE("trajectory frequency ordering via --xi2-ratio") {
    auto freq = [&](const std::string& tag, const std::string& ratio) {
        const std::string prefix = tmp_prefix("freq" + tag);
        REQUIRE(run("-c " + kPaperConfig + " -o " + prefix +
                    " trajectory --model adiabatic --xi2-ratio " + ratio +
                    " --t-end-gamma-m-t 0.5") == 0);
        const auto rows = read_csv(prefix + "_trajectory.csv");
        // Zero-crossing count of detrended q over the second half.
        std::vector<double> t, q;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            t.push_back(std::stod(rows[i][0]));
            q.push_back(std::stod(rows[i][5]));
        }
        const std::size_t start = q.size() / 2;
        double mean = 0.0;
        for (std::size_t i = start; i < q.size(); ++i) mean += q[i];
        mean /= q.size() - start;
        int crossings = 0;
        for (std::size_t i = start + 1; i < q.size(); ++i) {
            if ((q[i - 1] - mean > 0) != (q[i] - mean > 0)) ++crossings;
        }
        return crossings;
    };
    const int plus = freq("p", "0.003");
    const int zero = freq("z", "0");
    CHECK(plus > zero);
}

TEST_CASE("branches with eta 0 yields the single zero branch") {
    const std::string zero_cfg = "/tmp/optomech_cli_eta0.json";
    {
        auto j = nlohmann::json::parse(slurp(kPaperConfig));
        j["eta_over_kappa"] = 0.0;
        std::ofstream out(zero_cfg);
        out << j.dump();
    }
    const std::string prefix = tmp_prefix("br0");
    CHECK(run("-c " + zero_cfg + " -o " + prefix + " branches --n-points 11") == 0);
    const auto rows = read_csv(prefix + "_branches.csv");
    REQUIRE(rows.size() == 12);  // header + one branch per grid point
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][2]) == 0.0);
        CHECK(rows[i][1] == "1");
    }
}

TEST_CASE("branches fold summary reports the bistability onset near 60k") {
    const std::string prefix = tmp_prefix("brfold");
    CHECK(run("-c " + kPaperConfig + " -o " + prefix +
              " branches --delta-min 0 --delta-max 120 --n-points 121") == 0);
    const auto folds = nlohmann::json::parse(slurp(prefix + "_folds.json"));
    CHECK(folds["max_coexisting_count"].get<int>() == 3);
    REQUIRE(!folds["folds"].empty());
    const double first = folds["folds"][0]["delta_hi_over_kappa"].get<double>();
    CHECK(first > 55.0);
    CHECK(first < 65.0);
}

TEST_CASE("sweep row-count contract and determinism") {
    const std::string prefix1 = tmp_prefix("sw1");
    const std::string prefix2 = tmp_prefix("sw2");
    const std::string args = " sweep --xi2-ratios 0,-0.003 --injection both"
                             " --delta-min 0 --delta-max 100 --n-points 11";
    CHECK(run("-c " + kPaperConfig + " -o " + prefix1 + args) == 0);
    CHECK(run("-c " + kPaperConfig + " --threads 2 -o " + prefix2 + args) == 0);

    const auto rows = read_csv(prefix1 + "_observables.csv");
    CHECK(rows.size() == 1 + 2 * 2 * 11);  // header + ratios x injections x grid
    CHECK(rows[0] == std::vector<std::string>{"delta_c_over_kappa", "xi2_over_xi1",
                                              "squeezing_injected", "photon", "sigma_q",
                                              "sigma_Q", "s_q_db", "s_Q_db", "e_n"});
    // Identical bytes regardless of thread count.
    CHECK(slurp(prefix1 + "_observables.csv") == slurp(prefix2 + "_observables.csv"));
}

TEST_CASE("manifest snapshot round-trips as a config file") {
    const std::string prefix = tmp_prefix("round");
    REQUIRE(run("-c " + kPaperConfig + " -o " + prefix +
                " branches --delta-max 40 --n-points 5") == 0);
    const auto manifest = nlohmann::json::parse(slurp(prefix + "_manifest.json"));
    const std::string snap = "/tmp/optomech_cli_snap.json";
    {
        std::ofstream out(snap);
        out << manifest["config"].dump();
    }
    const std::string prefix2 = tmp_prefix("round2");
    REQUIRE(run("-c " + snap + " -o " + prefix2 +
                " branches --delta-max 40 --n-points 5") == 0);
    CHECK(slurp(prefix + "_branches.csv") == slurp(prefix2 + "_branches.csv"));
}
