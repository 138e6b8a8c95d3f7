// Command-line front end: parameter sweeps, the physical-implementation
// planner, and the oracle regression suite. CSV/JSON outputs are
// deterministic for a fixed configuration and seed.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

#include "ndc/sweeps.hpp"

namespace {

// exit codes: 0 ok, 1 check failure, 2 usage error, 3 resource error
constexpr int kOk = 0, kCheckFailure = 1, kUsageError = 2, kResourceError = 3;

int write_table(const ndc::SweepTable& table, const std::string& out, const std::string& format) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out.empty()) {
        file.open(out, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot open output file: " << out << "\n";
            return kUsageError;
        }
        os = &file;
    }
    if (format == "json")
        table.write_json(*os);
    else
        table.write_csv(*os);
    return kOk;
}

std::vector<ndc::QubitSpec> load_qubit_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open qubit config: " + path);
    nlohmann::json j;
    in >> j;
    std::vector<ndc::QubitSpec> out;
    for (const auto& item : j.at("qubits")) {
        ndc::QubitSpec q;
        q.n_d = item.at("n_d").get<double>();
        q.z_position = item.value("z_position_m", 0.0);
        q.label = item.value("label", std::string("custom"));
        out.push_back(q);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collective-spin parity-measurement NDC simulator"};
    app.require_subcommand(1);

    std::string out, format = "csv";
    app.add_option("--out", out, "output path (default: stdout)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // ---- ideal ----
    auto* ideal = app.add_subcommand("ideal", "closed-form violation sweep over phi");
    std::string ideal_tj = "4,20", ideal_grid = "0:pi:128";
    ideal->add_option("--twice-j", ideal_tj, "comma list of 2j values");
    ideal->add_option("--phi-grid", ideal_grid, "start:end:count (pi accepted)");

    // ---- two-angle ----
    auto* two = app.add_subcommand("two-angle", "independent rotation angles phi1, phi2");
    std::string two_tj = "20", two_g1 = "0:pi/2:48", two_g2 = "0:pi/2:48";
    two->add_option("--twice-j", two_tj);
    two->add_option("--phi1-grid", two_g1);
    two->add_option("--phi2-grid", two_g2);

    // ---- rotation-error ----
    auto* rot = app.add_subcommand("rotation-error", "Gaussian-averaged violation vs sigma_phi");
    std::string rot_tj = "4,20", rot_grid = "0:0.2:64";
    rot->add_option("--twice-j", rot_tj);
    rot->add_option("--sigma-grid", rot_grid);

    // ---- decoherence ----
    auto* dec = app.add_subcommand("decoherence", "violation under cavity decay / spin dephasing");
    std::string dec_tj = "8", dec_rc, dec_rs = "0";
    double dec_alpha = 2.0;
    std::string dec_phi = "pi/4";
    dec->add_option("--twice-j", dec_tj);
    dec->add_option("--rc", dec_rc, "comma list or empty for the default grid");
    dec->add_option("--rs", dec_rs, "comma list");
    dec->add_option("--alpha0", dec_alpha);
    dec->add_option("--phi", dec_phi);

    // ---- inhomogeneity ----
    auto* inh = app.add_subcommand("inhomogeneity", "seed-averaged violation vs coupling spread");
    int inh_n = 24, inh_seeds = 32;
    std::uint64_t inh_seed_base = 1;
    std::string inh_rsigma = "0,0.005,0.01", inh_groups = "1,2,3,4";
    double inh_alpha = 2.0;
    inh->add_option("--n-qubits", inh_n);
    inh->add_option("--sigma-g", inh_rsigma, "relative spreads sigma_g/<g>");
    inh->add_option("--groups", inh_groups);
    inh->add_option("--alpha0", inh_alpha);
    inh->add_option("--seeds", inh_seeds);
    inh->add_option("--seed-base", inh_seed_base);

    // ---- planner ----
    auto* plan = app.add_subcommand("planner", "physical-implementation sheets");
    std::string plan_config;
    double plan_dog = 10.0;
    plan->add_option("--config", plan_config, "JSON file with custom qubit specs");
    plan->add_option("--delta-over-g", plan_dog);

    // ---- oracle-check ----
    auto* chk = app.add_subcommand("oracle-check", "oracle-vs-analytic regression suite");
    double chk_scale = 1.0;
    int chk_nmax = -1;
    chk->add_option("--tolerance-scale", chk_scale, "multiply every tolerance (0 = strict)");
    chk->add_option("--n-max", chk_nmax, "override the Fock cutoff rule");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (*ideal) {
            ndc::sweeps::IdealConfig cfg{ndc::parse_int_list(ideal_tj),
                                         ndc::GridSpec::parse(ideal_grid)};
            return write_table(ndc::sweeps::run_ideal_sweep(cfg), out, format);
        }
        if (*two) {
            ndc::sweeps::TwoAngleConfig cfg{ndc::parse_int_list(two_tj),
                                            ndc::GridSpec::parse(two_g1),
                                            ndc::GridSpec::parse(two_g2)};
            return write_table(ndc::sweeps::run_two_angle_sweep(cfg), out, format);
        }
        if (*rot) {
            ndc::sweeps::RotationErrorConfig cfg{ndc::parse_int_list(rot_tj),
                                                 ndc::GridSpec::parse(rot_grid)};
            return write_table(ndc::sweeps::run_rotation_error_sweep(cfg), out, format);
        }
        if (*dec) {
            ndc::sweeps::DecoherenceConfig cfg;
            cfg.twice_j = ndc::parse_int_list(dec_tj);
            cfg.rc = dec_rc.empty() ? ndc::sweeps::default_rc_grid()
                                    : ndc::parse_double_list(dec_rc);
            cfg.rs = ndc::parse_double_list(dec_rs);
            cfg.alpha0 = dec_alpha;
            cfg.phi = ndc::parse_angle(dec_phi);
            return write_table(ndc::sweeps::run_decoherence_sweep(cfg), out, format);
        }
        if (*inh) {
            ndc::sweeps::InhomogeneityConfig cfg;
            cfg.N = inh_n;
            cfg.r_sigma = ndc::parse_double_list(inh_rsigma);
            cfg.n_groups = ndc::parse_int_list(inh_groups);
            cfg.alpha0 = inh_alpha;
            cfg.seeds = inh_seeds;
            cfg.seed_base = inh_seed_base;
            return write_table(ndc::sweeps::run_inhomogeneity_sweep(cfg), out, format);
        }
        if (*plan) {
            ndc::sweeps::PlannerConfig cfg;
            if (!plan_config.empty()) cfg.qubits = load_qubit_config(plan_config);
            cfg.delta_over_g = plan_dog;
            const auto sheets = ndc::sweeps::run_planner(cfg);
            if (!out.empty()) {
                std::ofstream file(out, std::ios::binary);
                if (!file) {
                    std::cerr << "error: cannot open output file: " << out << "\n";
                    return kUsageError;
                }
                ndc::sweeps::write_planner_json(file, sheets);
                ndc::sweeps::write_planner_text(std::cout, sheets);
            } else if (format == "json") {
                ndc::sweeps::write_planner_json(std::cout, sheets);
            } else {
                ndc::sweeps::write_planner_text(std::cout, sheets);
            }
            return kOk;
        }
        if (*chk) {
            ndc::sweeps::OracleCheckOptions opt;
            opt.tolerance_scale = chk_scale;
            if (chk_nmax >= 0) opt.n_max_override = chk_nmax;
            const auto results = ndc::sweeps::run_oracle_check(opt);
            std::ostream* os = &std::cout;
            std::ofstream file;
            if (!out.empty()) {
                file.open(out, std::ios::binary);
                os = &file;
            }
            ndc::sweeps::write_check_json(*os, results);
            bool all = true;
            for (const auto& r : results) {
                std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << "  delta=" << r.delta
                          << " tol=" << r.tolerance << "\n";
                all = all && r.pass;
            }
            return all ? kOk : kCheckFailure;
        }
    } catch (const ndc::resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kResourceError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailure;
    }
    return kUsageError;
}
