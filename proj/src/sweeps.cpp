#include "ndc/sweeps.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "ndc/decoherence.hpp"
#include "ndc/oracle.hpp"

namespace ndc {

namespace {

// Evaluate fn(i) for i in [0, n) on a small pool; results land in index order.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    const int workers = std::min<int>(n, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> futs;
    futs.reserve(workers);
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        }));
    }
    for (auto& f : futs) f.get();
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double parse_angle(const std::string& text) {
    // forms: <num>, pi, <num>pi, pi/<num>, <num>pi/<num>
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
    const auto pi_pos = s.find("pi");
    if (pi_pos == std::string::npos) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad number: " + text);
        return v;
    }
    double pre = 1.0, post = 1.0;
    const std::string head = s.substr(0, pi_pos);
    const std::string tail = s.substr(pi_pos + 2);
    if (!head.empty()) {
        if (head == "-")
            pre = -1.0;
        else
            pre = std::stod(head);
    }
    if (!tail.empty()) {
        if (tail[0] != '/') throw std::invalid_argument("bad angle: " + text);
        post = std::stod(tail.substr(1));
        if (post == 0.0) throw std::invalid_argument("bad angle: " + text);
    }
    return pre * M_PI / post;
}

GridSpec GridSpec::parse(const std::string& text) {
    GridSpec g;
    const auto c1 = text.find(':');
    const auto c2 = text.rfind(':');
    if (c1 == std::string::npos || c2 == c1)
        throw std::invalid_argument("grid must be start:end:count, got: " + text);
    g.start = parse_angle(text.substr(0, c1));
    g.end = parse_angle(text.substr(c1 + 1, c2 - c1 - 1));
    g.count = std::stoi(text.substr(c2 + 1));
    if (g.count < 1) throw std::invalid_argument("grid needs count >= 1: " + text);
    return g;
}

std::vector<double> GridSpec::points() const {
    if (count < 1) throw std::invalid_argument("empty grid");
    std::vector<double> p(count);
    const double step = (end - start) / count;
    for (int i = 0; i < count; ++i) p[i] = start + i * step;
    return p;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    if (out.empty()) throw std::invalid_argument("empty list: " + text);
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_angle(item));
    }
    if (out.empty()) throw std::invalid_argument("empty list: " + text);
    return out;
}

void SweepTable::write_csv(std::ostream& os) const {
    os << "# ndc " << kVersion << "\n";
    for (const auto& [k, v] : params) os << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << fmt17(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
}

void SweepTable::write_json(std::ostream& os) const {
    nlohmann::json j;
    j["version"] = kVersion;
    j["params"] = params;
    j["columns"] = columns;
    j["rows"] = rows;
    os << j.dump(2) << "\n";
}

namespace sweeps {

SweepTable run_ideal_sweep(const IdealConfig& cfg) {
    SweepTable t;
    t.columns = {"phi", "twice_j", "v_plus"};
    t.params["subcommand"] = "ideal";
    const auto phis = cfg.phi.points();
    t.params["phi_grid"] = fmt17(cfg.phi.start) + ":" + fmt17(cfg.phi.end) + ":" +
                           std::to_string(cfg.phi.count);
    for (int tj : cfg.twice_j) {
        for (double phi : phis) {
            const auto v = ideal::ideal_violation(SpinJ(tj), phi);
            t.rows.push_back({phi, double(tj), v.v_plus});
        }
    }
    return t;
}

SweepTable run_two_angle_sweep(const TwoAngleConfig& cfg) {
    SweepTable t;
    t.columns = {"phi1", "phi2", "twice_j", "v_plus"};
    t.params["subcommand"] = "two-angle";
    const auto p1 = cfg.phi1.points();
    const auto p2 = cfg.phi2.points();
    for (int tj : cfg.twice_j) {
        const SpinJ j(tj);
        std::vector<std::vector<double>> block(p1.size() * p2.size());
        parallel_for(static_cast<int>(block.size()), [&](int i) {
            const double a = p1[i / p2.size()];
            const double b = p2[i % p2.size()];
            const auto tab = ideal::two_angle_probabilities(j, {a, b});
            block[i] = {a, b, double(tj), tab.v_plus()};
        });
        for (auto& r : block) t.rows.push_back(std::move(r));
    }
    return t;
}

SweepTable run_rotation_error_sweep(const RotationErrorConfig& cfg) {
    SweepTable t;
    t.columns = {"sigma_phi", "twice_j", "v_abs", "v_smallangle"};
    t.params["subcommand"] = "rotation-error";
    const auto sigmas = cfg.sigma_phi.points();
    for (int tj : cfg.twice_j) {
        const SpinJ j(tj);
        for (double s : sigmas) {
            t.rows.push_back({s, double(tj), ideal::gaussian_averaged_violation(j, s),
                              ideal::gaussian_averaged_violation_smallangle(j, s)});
        }
    }
    return t;
}

std::vector<double> default_rc_grid() {
    // geometric from the small-decay anchor point up to strong decay
    std::vector<double> g;
    const double lo = 0.003, hi = 0.5;
    const int n = 32;
    for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
    return g;
}

SweepTable run_decoherence_sweep(const DecoherenceConfig& cfg) {
    SweepTable t;
    t.columns = {"r_c", "r_s", "twice_j", "alpha0", "v_abs"};
    t.params["subcommand"] = "decoherence";
    t.params["phi"] = fmt17(cfg.phi);
    t.params["alpha0"] = fmt17(cfg.alpha0);
    const CavityAmplitude alpha(cfg.alpha0);
    struct Point {
        int tj;
        double rc, rs;
    };
    std::vector<Point> pts;
    for (int tj : cfg.twice_j)
        for (double rc : cfg.rc)
            for (double rs : cfg.rs) pts.push_back({tj, rc, rs});
    std::vector<std::vector<double>> block(pts.size());
    parallel_for(static_cast<int>(pts.size()), [&](int i) {
        const auto& p = pts[i];
        const auto v = decoherence::decohered_violation(SpinJ(p.tj), cfg.phi, alpha,
                                                        DecoherenceRates(p.rc, p.rs));
        block[i] = {p.rc, p.rs, double(p.tj), cfg.alpha0, std::abs(v.v_plus)};
    });
    t.rows = std::move(block);
    return t;
}

SweepTable run_inhomogeneity_sweep(const InhomogeneityConfig& cfg) {
    SweepTable t;
    t.columns = {"r_sigma", "n_qubits", "n_groups", "mean_v_abs", "std_error", "n_seeds"};
    t.params["subcommand"] = "inhomogeneity";
    t.params["alpha0"] = fmt17(cfg.alpha0);
    t.params["mean_g"] = fmt17(cfg.mean_g);
    t.params["seed_base"] = std::to_string(cfg.seed_base);
    t.params["seeds"] = std::to_string(cfg.seeds);
    const CavityAmplitude alpha(cfg.alpha0);
    for (double rs : cfg.r_sigma) {
        for (int n : cfg.n_groups) {
            const auto avg = inhomogeneity::seed_averaged_violation(
                cfg.N, cfg.mean_g, rs * cfg.mean_g, n, alpha, cfg.seeds, cfg.seed_base);
            t.rows.push_back(
                {rs, double(cfg.N), double(n), avg.mean_abs_v, avg.std_error, double(avg.n_seeds)});
        }
    }
    return t;
}

std::vector<PlannerSheet> run_planner(const PlannerConfig& cfg) {
    const ResonatorGeometry geom = ResonatorGeometry::reference();
    std::vector<QubitSpec> qubits = cfg.qubits.empty() ? planner::reference_qubits() : cfg.qubits;
    std::vector<PlannerSheet> sheets;
    for (const auto& q : qubits)
        sheets.push_back(planner::build_sheet(q, geom, cfg.delta_over_g));
    return sheets;
}

void write_planner_text(std::ostream& os, const std::vector<PlannerSheet>& sheets) {
    os << std::left << std::setw(18) << "platform" << std::right << std::setw(14) << "g/2pi [MHz]"
       << std::setw(14) << "chi/2pi [MHz]" << std::setw(12) << "r_q [um]" << std::setw(8) << "N"
       << std::setw(16) << "gc_bnd [kHz]" << std::setw(16) << "gs_bnd [kHz]" << std::setw(12)
       << "sigma_phi" << "\n";
    for (const auto& s : sheets) {
        os << std::left << std::setw(18) << s.label << std::right << std::fixed
           << std::setprecision(3) << std::setw(14) << hz_from_rad_per_s(s.g) / 1e6
           << std::setw(14) << hz_from_rad_per_s(s.chi) / 1e6 << std::setw(12) << s.r_q * 1e6
           << std::setw(8) << s.n_inh << std::setw(16) << hz_from_rad_per_s(s.gamma_c_bound) / 1e3
           << std::setw(16) << hz_from_rad_per_s(s.gamma_s_bound) / 1e3 << std::setw(12)
           << std::setprecision(4) << s.sigma_phi_bound << "\n";
        os.unsetf(std::ios::fixed);
    }
}

void write_planner_json(std::ostream& os, const std::vector<PlannerSheet>& sheets) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : sheets) {
        nlohmann::json j;
        j["label"] = s.label;
        j["g_rad_per_s"] = s.g;
        j["g_over_2pi_hz"] = hz_from_rad_per_s(s.g);
        if (s.g_listed) j["g_listed_rad_per_s"] = *s.g_listed;
        j["delta_rad_per_s"] = s.delta;
        j["chi_rad_per_s"] = s.chi;
        j["r_q_m"] = s.r_q;
        j["n_ndc_inhomogeneity"] = s.n_inh;
        j["gamma_c_bound_rad_per_s"] = s.gamma_c_bound;
        j["gamma_s_bound_rad_per_s"] = s.gamma_s_bound;
        j["sigma_phi_bound_rad"] = s.sigma_phi_bound;
        j["strong_coupling_ok"] = s.strong_coupling_ok;
        arr.push_back(j);
    }
    nlohmann::json root;
    root["version"] = kVersion;
    root["sheets"] = arr;
    os << root.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// oracle regression suite
// ---------------------------------------------------------------------------
namespace {

double table_deviation(const ProbabilityTable& a, const ProbabilityTable& b) {
    double d = std::abs(a.p2_plus - b.p2_plus) + std::abs(a.p2_minus - b.p2_minus);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) d += std::abs(a.p12[i][k] - b.p12[i][k]);
    return d;
}

}  // namespace

std::vector<CheckResult> run_oracle_check(const OracleCheckOptions& opt) {
    std::vector<CheckResult> out;
    auto add = [&](const std::string& name, double delta, double tol, const std::string& note) {
        out.push_back({name, delta, tol * opt.tolerance_scale,
                       delta <= tol * opt.tolerance_scale, note});
    };
    const CavityAmplitude a6(6.0), a2(2.0);

    {  // closed-form table vs exact Fock protocol, j = 2
        const SpinJ j(4);
        const auto exact = oracle::full_protocol_exact(j, M_PI / 4, M_PI / 4, a6,
                                                       opt.n_max_override);
        add("table_i_vs_fock_j2", table_deviation(exact, ideal::ideal_probabilities(j, M_PI / 4)),
            1e-6, "|alpha0|=6, phi=pi/4");
    }
    {  // half-integer maximum
        const SpinJ j(3);
        const auto exact = oracle::full_protocol_exact(j, M_PI / 2, M_PI / 2, a6,
                                                       opt.n_max_override);
        add("half_integer_max_j32", std::abs(std::abs(exact.v_plus()) - 0.5), 1e-5,
            "phi=pi/2 reaches |V|=1/2");
    }
    {  // monotone convergence in |alpha0|
        const SpinJ j(4);
        double prev = 1e9;
        bool mono = true;
        double last = 0.0;
        for (double am : {2.0, 3.0, 4.0, 6.0}) {
            const auto exact = oracle::full_protocol_exact(j, M_PI / 4, M_PI / 4,
                                                           CavityAmplitude(am),
                                                           opt.n_max_override);
            last = table_deviation(exact, ideal::ideal_probabilities(j, M_PI / 4));
            mono = mono && (last < prev);
            prev = last;
        }
        add("fock_convergence_monotone", mono ? 0.0 : 1.0, 0.5, "deviation shrinks over 2,3,4,6");
    }
    {  // two-angle sums vs exact protocol
        const SpinJ j(6);
        const auto exact = oracle::full_protocol_exact(j, 0.3, 0.9, a6, opt.n_max_override);
        add("two_angle_vs_fock_j3",
            table_deviation(exact, ideal::two_angle_probabilities(j, {0.3, 0.9})), 1e-6,
            "phi1=0.3, phi2=0.9");
    }
    {  // analytic master-equation state vs RK4
        const SpinJ j(4);
        const DecoherenceRates rates(0.1, 0.05);
        const int nmax = opt.n_max_override.value_or(40);
        const auto rk = oracle::lindblad_rk4(j, M_PI / 4, a2, rates, M_PI, 2048, nmax);
        const auto an = decoherence::evolve_open(j, M_PI / 4, a2, rates, M_PI);
        add("lindblad_rk4_vs_analytic",
            oracle::trace_distance(rk.rho, oracle::analytic_joint_density(an, nmax)), 1e-4,
            "j=2, rc=0.1, rs=0.05, chi t=pi");
    }
    {  // closed-form decohered V vs exact protocol at zero rates
        const SpinJ j(4);
        const auto v_closed =
            decoherence::decohered_violation(j, M_PI / 4, a2, DecoherenceRates(0.0, 0.0));
        const auto exact =
            oracle::full_protocol_exact(j, M_PI / 4, M_PI / 4, a2, opt.n_max_override);
        add("decohered_closed_vs_fock", std::abs(v_closed.v_plus - exact.v_plus()), 1e-9,
            "rates=0, |alpha0|=2");
    }
    {  // XY term irrelevant for uniform couplings
        CouplingSample cs;
        cs.g = {1.0, 1.0, 1.0, 1.0};
        const auto off = oracle::qubit_level_protocol(cs, false, a6, opt.n_max_override);
        const auto on = oracle::qubit_level_protocol(cs, true, a6, opt.n_max_override);
        add("xy_term_uniform_invariance", table_deviation(off, on), 1e-10, "N=4 uniform");
    }
    {  // grouped tensor model vs qubit-level oracle
        CouplingSample cs;
        cs.g = {1.3, 1.3, 1.0, 1.0};
        const auto q = oracle::qubit_level_protocol(cs, false, a6, opt.n_max_override);
        const auto g = inhomogeneity::inhomogeneous_probabilities(
            inhomogeneity::group_couplings(cs, 2), a6);
        add("grouping_vs_qubit_level", table_deviation(q, g), 1e-8, "N=4, two-valued, n=2");
    }
    {  // disturbance-mitigation methods reproduce the ideal violation
        const SpinJ j(4);
        const double v_ideal = ideal::ideal_violation(j, M_PI / 4).v_plus;
        for (int m : {1, 2}) {
            const auto rep = oracle::disturbance_method_check(j, M_PI / 4, a6, m,
                                                              opt.n_max_override);
            add("method" + std::to_string(m) + "_violation",
                std::abs(rep.table.v_plus() - v_ideal), 1e-5, "vs ideal closed form");
            add("method" + std::to_string(m) + "_first_window_disturbance",
                rep.first_window_disturbance, 1e-8, "single-measurement branch");
        }
    }
    {  // resonant rotation approaches the ideal rotation
        const SpinJ j(2);
        const double g = 1.0, ar = 40.0;
        const double t = (M_PI / 4) / (2.0 * g * ar);
        const double fid = oracle::resonant_rotation_check(j, g, ar, t, opt.n_max_override);
        add("resonant_rotation_fidelity", 1.0 - fid, 1e-2, "alpha_r=40, phi=pi/4");
    }
    {  // POVM completeness / positivity
        const auto povm = oracle::HomodynePOVM::build(96);
        const Eigen::MatrixXd sum = povm.plus + povm.minus;
        const double comp = (sum - Eigen::MatrixXd::Identity(97, 97)).cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(povm.plus, Eigen::EigenvaluesOnly);
        add("povm_completeness", comp, 1e-8, "Pi+ + Pi- = 1");
        add("povm_positivity", std::max(0.0, -es.eigenvalues().minCoeff()), 1e-10,
            "Pi+ >= 0");
    }
    {  // leak exponent closed form vs quadrature of its integrand
        const double rc = 0.1, am = 2.0;
        const cplx closed = decoherence::leak_phase_at(1, rc, am, M_PI);
        const cplx quad = num::adaptive_simpson(
            [&](double t) {
                // (gamma_c/2)(|a_m|^2 + |a_n|^2 - 2 a_m conj(a_n)) with dl = 1
                const double mag2 = am * am * std::exp(-rc * t);
                return cplx(rc * mag2, 0.0) - rc * mag2 * std::exp(cplx(0.0, -t));
            },
            0.0, M_PI, 1e-13);
        add("leak_phase_vs_quadrature", std::abs(closed - quad), 1e-10, "|a|=2, rc=0.1, dl=1");
    }
    return out;
}

void write_check_json(std::ostream& os, const std::vector<CheckResult>& results) {
    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (const auto& r : results) {
        arr.push_back({{"name", r.name},
                       {"delta", r.delta},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass},
                       {"note", r.note}});
        all = all && r.pass;
    }
    nlohmann::json root;
    root["version"] = kVersion;
    root["all_pass"] = all;
    root["checks"] = arr;
    os << root.dump(2) << "\n";
}

}  // namespace sweeps
}  // namespace ndc
