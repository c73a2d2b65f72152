// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end runs of the casq executable.

#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int rc = -1;
    std::string out;
};

Run casq(const std::string& args) {
    const std::string cmd = std::string("\"") + CASQ_CLI_PATH + "\" " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() /
               ("casq_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override {
        if (!HasFailure()) fs::remove_all(dir_);
    }
    [[nodiscard]] std::string at(const std::string& name) const { return "\"" + (dir_ / name).string() + "\""; }
    [[nodiscard]] fs::path path(const std::string& name) const { return dir_ / name; }

    fs::path dir_;
};

std::vector<double> energies(const json& report) {
    std::vector<double> e;
    for (const auto& s : report.at("states")) e.push_back(s.at("energy_hartree").get<double>());
    return e;
}

std::array<double, 3> g_row(const json& report, const std::string& method) {
    for (const auto& row : report.at("g"))
        if (row.at("method") == method) {
            const auto g = row.at("g");
            return {g[0].get<double>(), g[1].get<double>(), g[2].get<double>()};
        }
    ADD_FAILURE() << "no " << method << " row";
    return {};
}

} // namespace

TEST_F(Cli, CountPrintsDeterminantNumbers) {
    auto r = casq("count --nelec 13 --norb 14 --ms2 1 --out " + at("a"));
    EXPECT_EQ(r.rc, 0);
    EXPECT_EQ(r.out, "10306296\n");
    r = casq("count --nelec 1 --norb 5 --ms2 1 --out " + at("b"));
    EXPECT_EQ(r.out, "5\n");
    r = casq("count --nelec 2 --norb 2 --ms2 1 --out " + at("c"));
    EXPECT_EQ(r.rc, 1);
    EXPECT_EQ(load(path("c/run_manifest.json")).at("status"), "input_error");
}

TEST_F(Cli, BareLigandFieldGivesPureOrbitalDoublets) {
    const auto r = casq("casci --lf d1 --zeta 0 --racah-b 0 --racah-c 0 --out " + at("o"));
    ASSERT_EQ(r.rc, 0);
    const json rep = load(path("o/casci_report.json"));
    ASSERT_EQ(rep.at("states").size(), 5u);
    for (const auto& s : rep.at("states")) {
        EXPECT_EQ(s.at("multiplicity"), 2);
        EXPECT_NEAR(s.at("s2").get<double>(), 0.75, 1e-9);
    }
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '%'), 5 + 1); // 5 determinants plus the header line
    EXPECT_NE(r.out.find("0 0 0 0 u (100%)"), std::string::npos);
    EXPECT_NE(r.out.find("u 0 0 0 0 (100%)"), std::string::npos);
    EXPECT_EQ(slurp(path("o/casci_report.txt")), r.out);
}

TEST_F(Cli, MissingInputFailsWithManifest) {
    const auto r = casq("casci --fcidump " + at("absent.fcidump") + " --out " + at("o"));
    EXPECT_EQ(r.rc, 1);
    const json man = load(path("o/run_manifest.json"));
    EXPECT_EQ(man.at("exit_code"), 1);
    EXPECT_EQ(man.at("status"), "input_error");
    EXPECT_FALSE(fs::exists(path("o/casci_report.txt")));
    EXPECT_EQ(casq("casci --out " + at("p")).rc, 1);
    EXPECT_EQ(casq("casci --lf d7 --out " + at("q")).rc, 1);
    EXPECT_EQ(casq("nonsense").rc, 1);
}

TEST_F(Cli, DavidsonMatchesDenseOracle) {
    ASSERT_EQ(casq("random-fcidump --norb 6 --nelec 6 --ms2 0 --seed 21 --output " + at("r.fcidump") + " --out " + at("g")).rc, 0);
    const std::string common = "casci --fcidump " + at("r.fcidump") + " --roots-mult 1=3 --roots-mult 3=2";
    ASSERT_EQ(casq(common + " --out " + at("dav")).rc, 0);
    ASSERT_EQ(casq(common + " --oracle dense --out " + at("den")).rc, 0);
    const auto a = energies(load(path("dav/casci_report.json")));
    const auto b = energies(load(path("den/casci_report.json")));
    ASSERT_EQ(a.size(), 5u);
    ASSERT_EQ(b.size(), 5u);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
    EXPECT_EQ(load(path("den/casci_report.json")).at("solver"), "dense");
    EXPECT_EQ(casq(common + " --oracle sparse --out " + at("bad")).rc, 1);
}

TEST_F(Cli, ReportsAreReproducible) {
    const std::string args = "casci --lf d9 --out ";
    ASSERT_EQ(casq(args + at("one")).rc, 0);
    ASSERT_EQ(casq(args + at("two")).rc, 0);
    EXPECT_EQ(slurp(path("one/casci_report.txt")), slurp(path("two/casci_report.txt")));
    EXPECT_EQ(slurp(path("one/casci_report.json")), slurp(path("two/casci_report.json")));
    const json man = load(path("one/run_manifest.json"));
    EXPECT_EQ(man.at("status"), "ok");
    EXPECT_TRUE(man.at("timings_s").contains("casci"));
}

TEST_F(Cli, GTensorFreeElectronAndOrderings) {
    ASSERT_EQ(casq("gtensor --lf d1 --zeta 0 --out " + at("free")).rc, 0);
    for (const char* m : {"EHA", "SOS"}) {
        for (double g : g_row(load(path("free/gtensor_report.json")), m)) EXPECT_NEAR(g, 2.002319, 1e-5);
    }
    ASSERT_EQ(casq("gtensor --lf d1 --out " + at("d1")).rc, 0);
    const auto d1 = g_row(load(path("d1/gtensor_report.json")), "EHA");
    EXPECT_LT(d1[2], d1[0]);
    EXPECT_LT(d1[0], 2.002319);
    ASSERT_EQ(casq("gtensor --lf d9 --out " + at("d9")).rc, 0);
    const auto d9 = g_row(load(path("d9/gtensor_report.json")), "EHA");
    EXPECT_GT(d9[2], d9[0]);
    EXPECT_GT(d9[0], 2.002319);
}

TEST_F(Cli, GTensorRefusesEvenElectronCounts) {
    ASSERT_EQ(casq("random-fcidump --norb 4 --nelec 4 --seed 3 --output " + at("e.fcidump") + " --out " + at("g")).rc, 0);
    EXPECT_EQ(casq("gtensor --fcidump " + at("e.fcidump") + " --out " + at("o")).rc, 1);
    EXPECT_NE(load(path("o/run_manifest.json")).at("error").get<std::string>().find("odd"), std::string::npos);
}

TEST_F(Cli, SpectrumFromLineFile) {
    {
        std::ofstream(path("one.lines")) << "2.0 0.5 band\n";
        std::ofstream(path("grid.conf")) << "spectrum_fwhm_ev = 0.1\nspectrum_min_ev = 0\nspectrum_max_ev = 4\nspectrum_step_ev = 0.01\n";
        std::ofstream(path("none.lines")) << "# nothing\n";
    }
    ASSERT_EQ(casq("spectrum --lines " + at("one.lines") + " --config " + at("grid.conf") + " --out " + at("a")).rc, 0);
    std::ifstream csv(path("a/spectrum.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "energy_eV,intensity");
    double best_x = -1.0, best_y = -1.0;
    int rows = 0;
    while (std::getline(csv, line)) {
        const auto comma = line.find(',');
        const double x = std::strtod(line.substr(0, comma).c_str(), nullptr), y = std::strtod(line.substr(comma + 1).c_str(), nullptr);
        if (y > best_y) best_x = x, best_y = y;
        ++rows;
    }
    EXPECT_EQ(rows, 401);
    EXPECT_NEAR(best_x, 2.0, 0.01);

    ASSERT_EQ(casq("spectrum --lines " + at("none.lines") + " --out " + at("b")).rc, 0);
    const std::string flat = slurp(path("b/spectrum.csv"));
    std::istringstream fs_in(flat);
    std::getline(fs_in, line);
    while (std::getline(fs_in, line)) EXPECT_EQ(std::strtod(line.substr(line.find(",") + 1).c_str(), nullptr), 0.0);
}

TEST_F(Cli, SpectrumNeedsDipoles) {
    const auto r = casq("spectrum --lf d1 --out " + at("o"));
    EXPECT_EQ(r.rc, 1);
    EXPECT_NE(load(path("o/run_manifest.json")).at("error").get<std::string>().find("dipole"), std::string::npos);
}

TEST_F(Cli, SampleInputsRun) {
    const std::string s = CASQ_SAMPLES_DIR;
    const std::string in = " --fcidump \"" + s + "/model_5e6o.fcidump\" --prop \"" + s + "/model_5e6o.prop\" --config \"" + s +
                           "/model_5e6o.conf\"";
    ASSERT_EQ(casq("spectrum" + in + " --out " + at("sp")).rc, 0);
    const json lines = load(path("sp/spectrum_lines.json"));
    EXPECT_FALSE(lines.empty());
    EXPECT_TRUE(fs::exists(path("sp/spectrum.csv")));
    ASSERT_EQ(casq("gtensor" + in + " --out " + at("gt")).rc, 0);
    const auto g = g_row(load(path("gt/gtensor_report.json")), "EHA");
    for (double v : g) EXPECT_TRUE(std::isfinite(v));
}

TEST_F(Cli, QdptSelectionAndSocSwitch) {
    const std::string s = CASQ_SAMPLES_DIR;
    {
        std::ofstream conf(path("doublets.conf"));
        conf << slurp(s + "/model_5e6o.conf") << "qdpt_multiplicities = 2\n";
        std::ofstream(path("nosoc.conf")) << "soc = false\n";
    }
    const std::string in = " --fcidump \"" + s + "/model_5e6o.fcidump\" --prop \"" + s + "/model_5e6o.prop\"";
    const auto all = casq("gtensor" + in + " --config \"" + s + "/model_5e6o.conf\" --out " + at("all"));
    const auto dbl = casq("gtensor" + in + " --config " + at("doublets.conf") + " --out " + at("dbl"));
    ASSERT_EQ(all.rc, 0);
    ASSERT_EQ(dbl.rc, 0);
    EXPECT_NE(all.out.find("EHA      4 doublets + 2 quartets"), std::string::npos);
    EXPECT_NE(dbl.out.find("EHA      4 doublets  "), std::string::npos);
    const json levels = load(path("dbl/gtensor_report.json")).at("soc_levels_hartree");
    EXPECT_EQ(levels.size(), 8u);
    EXPECT_EQ(load(path("all/gtensor_report.json")).at("soc_levels_hartree").size(), 16u);
    EXPECT_EQ(casq("gtensor --lf d1 --config " + at("nosoc.conf") + " --out " + at("off")).rc, 1);
}
