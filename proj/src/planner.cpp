#include "ndc/planner.hpp"

#include <cmath>

namespace ndc {

ResonatorGeometry ResonatorGeometry::from_dimensions(double lx, double ly, double lz,
                                                     double eps_r) {
    if (lx <= 0 || ly <= 0 || lz <= 0 || eps_r < 1.0)
        throw std::domain_error("ResonatorGeometry: invalid dimensions");
    const double omega = M_PI * constants::speed_of_light / (lx * std::sqrt(eps_r));
    return {lx, ly, lz, eps_r, omega};
}

ResonatorGeometry ResonatorGeometry::reference() {
    return from_dimensions(2.0e-2, 8.0e-6, 2.0e-7, 5.0);
}

namespace planner {

double evanescent_decay(const ResonatorGeometry& geom, double z) {
    if (z <= geom.L_z) return 1.0;
    const double k0 = geom.omega / constants::speed_of_light;
    const double k2 = M_PI * M_PI / (geom.L_x * geom.L_x) +
                      M_PI * M_PI / (geom.L_y * geom.L_y) - k0 * k0;
    if (k2 <= 0.0) return 1.0;  // propagating TM mode, no evanescent decay
    const double kappa = std::sqrt(k2);
    const double beta = kappa * std::tanh(kappa * geom.L_z);
    return std::exp(-beta * (z - geom.L_z));
}

double coupling_from_dipole(const QubitSpec& q, const ResonatorGeometry& geom) {
    if (q.n_d <= 0.0) throw std::domain_error("QubitSpec: n_d must be > 0");
    const double d = q.dipole();
    const double g = d * std::sqrt(geom.omega / (2.0 * constants::hbar * constants::eps0 *
                                                 geom.epsilon_r * geom.volume()));
    return g * evanescent_decay(geom, q.z_position);
}

double min_qubit_distance(const QubitSpec& q, double g, double ratio, double delta_over_g) {
    if (ratio <= 0.0 || g <= 0.0) throw std::domain_error("min_qubit_distance: bad inputs");
    const double chi = 4.0 * g / delta_over_g;
    const double d = q.dipole();
    const double r3 = d * d / (4.0 * M_PI * constants::eps0 * constants::hbar * ratio * chi);
    return std::cbrt(r3);
}

CouplingSample positional_couplings(int N, double r_q, const ResonatorGeometry& geom, double g) {
    if (N < 1 || r_q <= 0.0) throw std::domain_error("positional_couplings: bad inputs");
    if (N * r_q > geom.L_x)
        throw std::domain_error("positional_couplings: qubit chain exceeds the resonator length");
    CouplingSample s;
    s.seed = 0;
    s.g.resize(N);
    const int k0 = -(N / 2);
    for (int i = 0; i < N; ++i)
        s.g[i] = g * std::cos(M_PI * r_q * (k0 + i) / geom.L_x);
    double mean = 0.0;
    for (double v : s.g) mean += v;
    s.mean_g = mean / N;
    double var = 0.0;
    for (double v : s.g) var += (v - s.mean_g) * (v - s.mean_g);
    s.sigma_g = std::sqrt(var / N);
    return s;
}

bool placement_warning(int N, double r_q, const ResonatorGeometry& geom) {
    return N * r_q > 0.2 * geom.L_x;
}

double positional_mean_formula(double g, double r_q, const ResonatorGeometry& geom, int N) {
    const double a = M_PI * r_q / geom.L_x;
    return g * (1.0 - a * a * (double(N) * N + 2.0) / 24.0);
}

double positional_sigma_formula(double g, double r_q, const ResonatorGeometry& geom, int N) {
    const double a = M_PI * r_q / geom.L_x;
    const double n2 = double(N) * N;
    return g * a * a * std::sqrt((n2 * n2 + 10.0 * n2 - 11.0) / 720.0);
}

int n_ndc_bound(const ResonatorGeometry& geom, double r_q) {
    if (r_q <= 0.0) throw std::domain_error("n_ndc_bound: r_q must be > 0");
    return static_cast<int>(std::floor(0.6 * std::pow(geom.L_x / r_q, 2.0 / 3.0)));
}

PlannerSheet build_sheet(const QubitSpec& q, const ResonatorGeometry& geom,
                         double delta_over_g, std::optional<double> g_listed) {
    PlannerSheet s;
    s.label = q.label;
    s.g = coupling_from_dipole(q, geom);
    s.g_listed = g_listed;
    s.delta = delta_over_g * s.g;
    s.chi = 4.0 * s.g * s.g / s.delta;
    s.r_q = min_qubit_distance(q, s.g, 0.05, delta_over_g);
    s.n_inh = n_ndc_bound(geom, s.r_q);
    s.gamma_c_bound = s.g / 25.0;
    s.gamma_s_bound = s.g / (2.5 * s.n_inh);
    s.sigma_phi_bound = 1.0 / (4.0 * std::sqrt(2.0 * s.n_inh + 1.0));
    s.strong_coupling_ok = s.gamma_c_bound < s.g && s.gamma_s_bound < s.g;
    return s;
}

std::vector<QubitSpec> reference_qubits() {
    return {
        {1.0e4, 0.0, "superconducting"},
        {3.0e3, 50.0e-6, "rydberg"},
        {1.0e2, 0.0, "spin-orbit"},
    };
}

}  // namespace planner
}  // namespace ndc
