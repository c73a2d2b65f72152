// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

// casq command-line front end.
//
// Exit codes: 0 success, 1 input error, 2 non-convergence, 3 invariant breach.

#include <casq/casq.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

#ifndef CASQ_VERSION
#define CASQ_VERSION "0.0.0"
#endif

namespace {

struct Manifest {
    std::string command;
    json config = json::object();
    json inputs = json::object();
    json timings = json::object();
    std::vector<std::string> warnings;
    std::string status = "ok";
    std::string error;
    int exit_code = 0;

    void warn(const std::string& w) {
        warnings.push_back(w);
        std::cerr << "warning: " << w << "\n";
    }

    [[nodiscard]] json to_json() const {
        return json{{"tool", "casq"},
                    {"version", CASQ_VERSION},
                    {"command", command},
                    {"status", status},
                    {"exit_code", exit_code},
                    {"error", error},
                    {"config", config},
                    {"inputs", inputs},
                    {"timings_s", timings},
                    {"warnings", warnings}};
    }
};

class Stage {
public:
    Stage(Manifest& m, std::string name) : m_(m), name_(std::move(name)), t0_(std::chrono::steady_clock::now()) {}
    ~Stage() {
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0_;
        m_.timings[name_] = dt.count();
    }
    Stage(const Stage&) = delete;
    Stage& operator=(const Stage&) = delete;

private:
    Manifest& m_;
    std::string name_;
    std::chrono::steady_clock::time_point t0_;
};

std::string read_file(const std::string& path, Manifest& man) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw casq::InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    man.inputs[path] = {{"fnv1a64", casq::fnv1a64(text)}, {"bytes", text.size()}};
    return text;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw casq::InputError("cannot write '" + path.string() + "'");
    out << text;
}

struct InputArgs {
    std::string config;
    std::string fcidump;
    std::string prop;
    std::string lf;
    std::optional<double> zeta;
    std::optional<double> racah_b;
    std::optional<double> racah_c;
    std::vector<std::string> roots_mult;
    std::string ms2;
    std::string oracle;
    double threshold = 5.0;
};

struct Problem {
    casq::OrbitalSpace orbitals;
    casq::IntegralSet ints;
    casq::PropertyIntegrals prop;
    casq::RunConfig cfg;
};

json config_json(const casq::RunConfig& c) {
    json roots = json::object();
    for (const auto& [mult, n] : c.roots_per_multiplicity) roots[std::to_string(mult)] = n;
    return json{{"cas_nelec", c.n_elec},
                {"cas_norb", c.n_orb},
                {"roots_per_multiplicity", roots},
                {"ms2_blocks", c.ms2_blocks},
                {"davidson",
                 {{"tol", c.davidson.tol},
                  {"max_subspace", c.davidson.max_subspace},
                  {"max_iter", c.davidson.max_iter},
                  {"guess_dim", c.davidson.guess_dim}}},
                {"soc", c.soc_enabled},
                {"qdpt_multiplicities", c.qdpt_multiplicities},
                {"spectrum",
                 {{"fwhm_ev", c.spectrum.fwhm_ev},
                  {"min_ev", c.spectrum.min_ev},
                  {"max_ev", c.spectrum.max_ev},
                  {"step_ev", c.spectrum.step_ev}}}};
}

Problem load_problem(const InputArgs& a, Manifest& man) {
    Stage st(man, "ingest");
    Problem p;
    if (!a.lf.empty()) {
        if (!a.fcidump.empty()) throw casq::InputError("--lf and --fcidump are mutually exclusive");
        auto model = casq::lf::preset(a.lf);
        if (a.zeta) model.zeta = *a.zeta;
        if (a.racah_b) model.racah_b = *a.racah_b;
        if (a.racah_c) model.racah_c = *a.racah_c;
        auto sys = casq::build_ligand_field_model(model);
        p.orbitals = sys.orbitals;
        p.ints = std::move(sys.integrals);
        p.prop = std::move(sys.properties);
        p.cfg = sys.config;
        man.config["ligand_field"] = {{"preset", a.lf},
                                      {"zeta_cm", model.zeta},
                                      {"racah_b_ev", model.racah_b},
                                      {"racah_c_ev", model.racah_c},
                                      {"n_elec", model.n_elec}};
    } else {
        if (a.zeta || a.racah_b || a.racah_c)
            throw casq::InputError("--zeta/--racah-b/--racah-c apply only to --lf models");
        if (a.fcidump.empty()) throw casq::InputError("no Hamiltonian given: use --fcidump PATH or --lf PRESET");
        auto data = casq::parse_fcidump(read_file(a.fcidump, man));
        p.orbitals = data.orbitals;
        p.ints = std::move(data.integrals);
        p.cfg.n_elec = data.n_elec;
        p.cfg.n_orb = data.orbitals.n_orb;
        p.cfg.roots_per_multiplicity[std::abs(data.ms2) + 1] = 1;
        p.prop = casq::PropertyIntegrals::zero(p.cfg.n_orb);
    }
    if (!a.prop.empty()) p.prop = casq::parse_property_integrals(read_file(a.prop, man), p.ints.n_orb());
    if (!a.config.empty()) p.cfg = casq::parse_run_config(read_file(a.config, man), p.cfg);
    if (!a.roots_mult.empty()) {
        p.cfg.roots_per_multiplicity.clear();
        for (const auto& s : a.roots_mult) {
            const auto eq = s.find('=');
            int mult = 0, count = 0;
            try {
                if (eq == std::string::npos) throw std::invalid_argument(s);
                mult = std::stoi(s.substr(0, eq));
                count = std::stoi(s.substr(eq + 1));
            } catch (const std::exception&) {
                throw casq::InputError("--roots-mult expects N=K, got '" + s + "'");
            }
            p.cfg.roots_per_multiplicity[mult] = count;
        }
    }
    if (!a.ms2.empty()) p.cfg.ms2_blocks = casq::detail::parse_int_list(a.ms2, " in --ms2");
    if (p.cfg.n_orb != p.ints.n_orb())
        throw casq::InputError("config cas_norb = " + std::to_string(p.cfg.n_orb) + " but the integrals have " +
                               std::to_string(p.ints.n_orb()) + " orbitals");
    p.cfg.validate();
    if (p.cfg.total_roots() == 0) throw casq::InputError("no roots requested");
    man.config["run"] = config_json(p.cfg);
    man.config["oracle"] = a.oracle.empty() ? "none" : a.oracle;
    return p;
}

casq::SolverKind solver_kind(const InputArgs& a) {
    if (a.oracle.empty()) return casq::SolverKind::davidson;
    if (a.oracle == "dense") return casq::SolverKind::dense;
    throw casq::InputError("unknown --oracle '" + a.oracle + "' (expected dense)");
}

casq::MultipletSolve run_casci(const Problem& p, const casq::SpaceFamily& family, const InputArgs& a, Manifest& man) {
    Stage st(man, "casci");
    auto res = casq::solve_multiplets(family, p.ints, p.cfg.roots_per_multiplicity, p.cfg.davidson, solver_kind(a),
                                      p.cfg.ms2_blocks);
    for (const auto& w : res.warnings) man.warn(w);
    return res;
}

void emit(const fs::path& out, const std::string& stem, const std::string& text, const json& j) {
    write_file(out / (stem + ".txt"), text);
    write_file(out / (stem + ".json"), j.dump(2) + "\n");
    std::cout << text;
}

int cmd_count(int n_elec, int n_orb, int ms2, Manifest& man) {
    man.config["count"] = {{"nelec", n_elec}, {"norb", n_orb}, {"ms2", ms2}};
    if (n_orb < 1 || n_orb > 64) throw casq::InputError("norb must be in [1, 64]");
    const auto n = casq::cas_dimension(n_elec, n_orb, ms2);
    std::cout << n << "\n";
    return 0;
}

int cmd_casci(const InputArgs& a, const fs::path& out, Manifest& man) {
    const Problem p = load_problem(a, man);
    const casq::SpaceFamily family(p.cfg.n_elec, p.cfg.n_orb);
    const auto res = run_casci(p, family, a, man);
    Stage st(man, "report");
    casq::StateReportOptions ro{a.threshold, p.orbitals.labels};
    std::string text = casq::state_report_text(family, res.multiplets, ro);
    json j = casq::state_report_json(family, res.multiplets, ro);
    const auto occ = casq::natural_occupations(casq::one_rdm(family, {res.multiplets.front()}, {1.0}));
    text += "\n" + casq::occupations_text(occ);
    j["ground_natural_occupations"] = occ;
    const auto gaps = casq::gap_report(res.multiplets);
    text += "\n" + casq::to_text(gaps);
    j["gaps"] = casq::to_json(gaps);
    j["solver"] = a.oracle.empty() ? "davidson" : a.oracle;
    emit(out, "casci_report", text, j);
    return 0;
}

int cmd_gtensor(const InputArgs& a, const fs::path& out, Manifest& man) {
    const Problem p = load_problem(a, man);
    if (p.cfg.n_elec % 2 == 0)
        throw casq::InputError("g-tensor needs an odd electron count (no Kramers pair for " +
                               std::to_string(p.cfg.n_elec) + " electrons)");
    if (!p.cfg.soc_enabled) throw casq::InputError("g-tensor needs spin-orbit coupling (config sets soc = false)");
    const casq::SpaceFamily family(p.cfg.n_elec, p.cfg.n_orb);
    const auto res = run_casci(p, family, a, man);
    Stage st(man, "soc");
    std::vector<std::size_t> selected;
    if (!p.cfg.qdpt_multiplicities.empty()) {
        for (std::size_t i = 0; i < res.multiplets.size(); ++i)
            if (std::find(p.cfg.qdpt_multiplicities.begin(), p.cfg.qdpt_multiplicities.end(),
                          res.multiplets[i].multiplicity()) != p.cfg.qdpt_multiplicities.end())
                selected.push_back(i);
        if (selected.empty() || selected.front() != 0)
            throw casq::InputError("qdpt_multiplicities must include the ground multiplet's multiplicity");
    }
    const std::string roots = casq::roots_summary(res.multiplets);
    std::vector<casq::GTableRow> rows;
    const auto eha = casq::g_tensor_from_multiplets(family, res.multiplets, p.prop, selected);
    std::string qdpt_roots = roots;
    if (!selected.empty()) {
        std::vector<casq::Multiplet> in_qdpt;
        for (std::size_t i : selected) in_qdpt.push_back(res.multiplets[i]);
        qdpt_roots = casq::roots_summary(in_qdpt);
    }
    rows.push_back({"EHA", qdpt_roots, eha.g, ""});
    const auto& ground = res.multiplets.front();
    std::vector<casq::Multiplet> excited(res.multiplets.begin() + 1, res.multiplets.end());
    try {
        rows.push_back({"SOS", roots, casq::g_tensor_sos(family, ground, excited, p.prop), ""});
    } catch (const casq::InputError& e) {
        rows.push_back({"SOS", roots, std::nullopt, e.what()});
        man.warn(std::string("sum-over-states g-tensor skipped: ") + e.what());
    }
    std::string text = "# g-tensor principal values (sorted to x, y, z by axis projection)\n" + casq::g_table_text(rows);
    text += "# lowest spin-orbit levels (cm^-1 above the ground level)\n";
    const double e0 = eha.states.energies[0];
    for (Eigen::Index k = 0; k < eha.states.energies.size() && k < 12; ++k)
        text += "  " + casq::format_cm((eha.states.energies[k] - e0) * casq::units::hartree_to_cm) + "\n";
    json j{{"g", casq::g_table_json(rows)}, {"soc_levels_hartree", std::vector<double>(eha.states.energies.data(), eha.states.energies.data() + eha.states.energies.size())}};
    emit(out, "gtensor_report", text, j);
    return 0;
}

int cmd_spectrum(const InputArgs& a, const std::string& lines_path, const fs::path& out, Manifest& man) {
    std::vector<casq::SpectrumLine> lines;
    std::vector<std::string> weights;
    casq::SpectrumOptions so;
    if (!lines_path.empty()) {
        Stage st(man, "ingest");
        lines = casq::parse_lines(read_file(lines_path, man));
        if (!a.config.empty()) so = casq::parse_run_config(read_file(a.config, man), casq::RunConfig{}).spectrum;
        man.config["spectrum"] = {{"fwhm_ev", so.fwhm_ev}, {"min_ev", so.min_ev}, {"max_ev", so.max_ev}, {"step_ev", so.step_ev}};
    } else {
        const Problem p = load_problem(a, man);
        if (!p.prop.has_dipoles())
            throw casq::InputError("no dipole integrals: supply DIP_X/Y/Z in --prop or a --lines file");
        so = p.cfg.spectrum;
        const casq::SpaceFamily family(p.cfg.n_elec, p.cfg.n_orb);
        const auto res = run_casci(p, family, a, man);
        Stage st(man, "spectra");
        lines = casq::absorption_lines(family, res.multiplets, p.prop);
        for (std::size_t i = 1; i < res.multiplets.size(); ++i) {
            const auto& top = res.multiplets[i].top();
            const auto dec = casq::decompose(family.at(top.ms2), top.coeffs, 0.0);
            weights.push_back(dec.empty() ? "" : dec.front().format());
        }
    }
    Stage st(man, "broaden");
    const casq::EnergyGrid grid{so.min_ev, so.max_ev, so.step_ev};
    const auto x = grid.points();
    const auto y = casq::broaden(lines, so.fwhm_ev, x);
    if (!casq::grid_covers(lines, so.fwhm_ev, grid)) man.warn("some lines lie within 3 sigma of the grid edge");
    write_file(out / "spectrum.csv", casq::spectrum_csv(x, y));
    emit(out, "spectrum_lines", casq::line_table_text(lines, weights), casq::line_table_json(lines, weights));
    return 0;
}

int cmd_random_fcidump(int n_orb, int n_elec, int ms2, std::uint64_t seed, const std::string& path,
                       const std::string& prop_path, Manifest& man) {
    man.config["random"] = {{"norb", n_orb}, {"nelec", n_elec}, {"ms2", ms2}, {"seed", seed}};
    (void)casq::cas_electron_counts(n_elec, n_orb, ms2);
    const auto ints = casq::random_integrals(n_orb, seed);
    write_file(path, casq::write_fcidump(ints, n_elec, ms2));
    if (!prop_path.empty())
        write_file(prop_path, casq::write_property_integrals(casq::random_property_integrals(n_orb, seed + 1)));
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_bench_sigma(int n_elec, int n_orb, int ms2, std::uint64_t seed, int repeat, Manifest& man) {
    man.config["bench"] = {{"nelec", n_elec}, {"norb", n_orb}, {"ms2", ms2}, {"seed", seed}, {"repeat", repeat}};
    std::optional<casq::CasSpace> space;
    std::optional<casq::HamiltonianOperator> hop;
    const auto ints = casq::random_integrals(n_orb, seed);
    {
        Stage st(man, "setup");
        space.emplace(n_elec, n_orb, ms2);
        hop.emplace(*space, ints);
    }
    Eigen::VectorXd v = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(space->size()), 1.0);
    v.normalize();
    double best = 1e300;
    for (int r = 0; r < std::max(1, repeat); ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const Eigen::VectorXd s = hop->apply(v);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        best = std::min(best, dt.count());
        v = s.normalized();
    }
    man.timings["sigma_best"] = best;
    const double rate = static_cast<double>(space->size()) / best;
    std::printf("determinants %zu\nworkers %d\nsigma_seconds %.4f\nthroughput_det_per_s %.4e\n", space->size(),
                casq::worker_count(), best, rate);
    man.config["result"] = {{"determinants", space->size()}, {"sigma_seconds", best}, {"det_per_second", rate}};
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"casq: CASCI with spin-orbit QDPT, g-tensors and absorption spectra"};
    app.require_subcommand(1);
    std::string out_dir = ".";
    int threads = 0;
    app.add_option("--out", out_dir, "Output directory for reports and the run manifest");
    app.add_option("--threads", threads, "Worker threads (default: CASQ_THREADS or all cores)");
    app.set_version_flag("--version", std::string("casq ") + CASQ_VERSION);

    InputArgs in;
    auto add_inputs = [&](CLI::App* c) {
        c->add_option("--config", in.config, "Run configuration file (key = value)");
        c->add_option("--fcidump", in.fcidump, "FCIDUMP integral file");
        c->add_option("--prop", in.prop, "Property integral file (ANGMOM_*, SOC_*, DIP_*)");
        c->add_option("--lf", in.lf, "Built-in ligand-field preset: d1-tetragonal (d1) or d9-planar (d9)");
        c->add_option("--zeta", in.zeta, "Override the preset SOC constant (cm^-1)");
        c->add_option("--racah-b", in.racah_b, "Override the preset Racah B (eV)");
        c->add_option("--racah-c", in.racah_c, "Override the preset Racah C (eV)");
        c->add_option("--roots-mult", in.roots_mult, "Roots per multiplicity as N=K (repeatable)");
        c->add_option("--ms2", in.ms2, "Comma-separated 2*M_S blocks to cross-check");
        c->add_option("--oracle", in.oracle, "Use the dense reference solver ('dense')");
        c->add_option("--out", out_dir, "Output directory");
        c->add_option("--threads", threads, "Worker threads");
    };

    int n_elec = 0, n_orb = 0, ms2 = 0, repeat = 3;
    std::uint64_t seed = 1;
    std::string lines_path, fcidump_out, prop_out;

    auto* count = app.add_subcommand("count", "Print the determinant count of CAS(nelec, norb) at ms2");
    count->add_option("--nelec", n_elec)->required();
    count->add_option("--norb", n_orb)->required();
    count->add_option("--ms2", ms2)->required();
    count->add_option("--out", out_dir, "Output directory");

    auto* casci = app.add_subcommand("casci", "Solve CASCI multiplets and report decompositions");
    add_inputs(casci);
    casci->add_option("--threshold", in.threshold, "Decomposition cutoff in percent");

    auto* gt = app.add_subcommand("gtensor", "g-tensor by effective Hamiltonian and sum over states");
    add_inputs(gt);

    auto* spectrum_cmd = app.add_subcommand("spectrum", "Absorption lines and broadened spectrum");
    add_inputs(spectrum_cmd);
    spectrum_cmd->add_option("--lines", lines_path, "Line file: energy_eV f_osc [label] per line");

    auto* rnd = app.add_subcommand("random-fcidump", "Write a seeded model FCIDUMP");
    rnd->add_option("--norb", n_orb)->required();
    rnd->add_option("--nelec", n_elec)->required();
    rnd->add_option("--ms2", ms2);
    rnd->add_option("--seed", seed);
    rnd->add_option("--output", fcidump_out)->required();
    rnd->add_option("--prop-output", prop_out, "Also write random property integrals");
    rnd->add_option("--out", out_dir, "Output directory");

    auto* bench = app.add_subcommand("bench-sigma", "Time one sigma-vector build on a model integral set");
    bench->add_option("--nelec", n_elec)->required();
    bench->add_option("--norb", n_orb)->required();
    bench->add_option("--ms2", ms2);
    bench->add_option("--seed", seed);
    bench->add_option("--repeat", repeat);
    bench->add_option("--out", out_dir, "Output directory");
    bench->add_option("--threads", threads, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    Manifest man;
    for (int i = 1; i < argc; ++i) man.command += (i > 1 ? " " : "") + std::string(argv[i]);
    int rc = 0;
    const fs::path out(out_dir);
    try {
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec) throw casq::InputError("cannot create output directory '" + out_dir + "': " + ec.message());
        casq::set_worker_count(threads);
        man.config["workers"] = casq::worker_count();
        if (*count) rc = cmd_count(n_elec, n_orb, ms2, man);
        else if (*casci) rc = cmd_casci(in, out, man);
        else if (*gt) rc = cmd_gtensor(in, out, man);
        else if (*spectrum_cmd) rc = cmd_spectrum(in, lines_path, out, man);
        else if (*rnd) rc = cmd_random_fcidump(n_orb, n_elec, ms2, seed, fcidump_out, prop_out, man);
        else if (*bench) rc = cmd_bench_sigma(n_elec, n_orb, ms2, seed, repeat, man);
    } catch (const casq::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        man.status = "input_error";
        man.error = e.what();
        rc = 1;
    } catch (const casq::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        man.status = "not_converged";
        man.error = e.what();
        rc = 2;
    } catch (const casq::InvariantError& e) {
        std::cerr << "error: " << e.what() << "\n";
        man.status = "invariant_breach";
        man.error = e.what();
        rc = 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        man.status = "internal_error";
        man.error = e.what();
        rc = 3;
    }
    man.exit_code = rc;
    try {
        write_file(out / "run_manifest.json", man.to_json().dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << "warning: run manifest not written: " << e.what() << "\n";
    }
    return rc;
}
