#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ndc/inhomogeneity.hpp"

namespace ndc {

/// CODATA 2018 values, SI.
namespace constants {
constexpr double hbar = 1.054571817e-34;       // J s
constexpr double eps0 = 8.8541878128e-12;      // F/m
constexpr double bohr_radius = 5.29177210903e-11;  // m
constexpr double elementary_charge = 1.602176634e-19;  // C
constexpr double speed_of_light = 299792458.0;  // m/s
}  // namespace constants

inline double rad_per_s_from_hz(double f) { return 2.0 * M_PI * f; }
inline double hz_from_rad_per_s(double w) { return w / (2.0 * M_PI); }

/// Open-top conducting-box approximation of a coplanar waveguide resonator.
struct ResonatorGeometry {
    double L_x, L_y, L_z;   // meters
    double epsilon_r;
    double omega;           // fundamental angular frequency, rad/s

    double volume() const { return L_x * L_y * L_z; }

    /// Auto-derives omega/(2 pi) = c / (2 L_x sqrt(eps_r)).
    static ResonatorGeometry from_dimensions(double lx, double ly, double lz, double eps_r);
    /// The geometry used throughout: 2e-2 x 8e-6 x 2e-7 m, eps_r = 5.
    static ResonatorGeometry reference();
};

struct QubitSpec {
    double n_d = 1.0;        // dipole in units of a0*e
    double z_position = 0.0; // meters above the substrate
    std::string label;
    double dipole() const { return n_d * constants::bohr_radius * constants::elementary_charge; }
};

/// Derived operating point plus noise bounds for one qubit platform.
struct PlannerSheet {
    std::string label;
    double g = 0.0;                 // formula coupling, rad/s
    std::optional<double> g_listed; // externally quoted coupling, rad/s, if any
    double delta = 0.0;             // detuning, rad/s
    double chi = 0.0;               // 4 g^2 / delta
    double r_q = 0.0;               // minimum qubit spacing, m
    int n_inh = 0;                  // inhomogeneity-limited qubit number
    double gamma_c_bound = 0.0;     // cavity-decay bound g/25, rad/s
    double gamma_s_bound = 0.0;     // spin-dephasing bound g/(2.5 N), rad/s
    double sigma_phi_bound = 0.0;   // rad
    bool strong_coupling_ok = true; // bounds below the coupling itself
};

namespace planner {

/// g = d sqrt(omega / (2 hbar eps0 eps_r V)), times the evanescent factor when
/// the qubit sits above the open face. Returned in rad/s; for the reference
/// geometry this evaluates to n_d * 7.1e4 s^-1 (the quoted "71 kHz" figure is
/// this angular value).
double coupling_from_dipole(const QubitSpec& q, const ResonatorGeometry& geom);

/// exp(-beta (z - L_z)) for z > L_z with beta = kappa tanh(kappa L_z),
/// kappa^2 = (pi/L_x)^2 + (pi/L_y)^2 - (omega/c)^2; 1 inside the box.
double evanescent_decay(const ResonatorGeometry& geom, double z);

/// Spacing at which the dipole-dipole coupling d^2/(4 pi eps0 hbar r^3)
/// equals ratio * chi (chi = 4g/delta_over_g * g).
double min_qubit_distance(const QubitSpec& q, double g, double ratio = 0.05,
                          double delta_over_g = 10.0);

/// Standing-wave couplings g_k = g cos(pi r_q k / L_x), k = -N/2 .. N/2-1.
CouplingSample positional_couplings(int N, double r_q, const ResonatorGeometry& geom, double g);

/// True when the chain occupies more than 20% of the resonator length.
bool placement_warning(int N, double r_q, const ResonatorGeometry& geom);

/// Closed-form mean g (1 - a^2 (N^2+2)/24) and standard deviation
/// g a^2 sqrt((N^4 + 10 N^2 - 11)/720), a = pi r_q / L_x.
double positional_mean_formula(double g, double r_q, const ResonatorGeometry& geom, int N);
double positional_sigma_formula(double g, double r_q, const ResonatorGeometry& geom, int N);

/// floor(0.6 (L_x / r_q)^{2/3}).
int n_ndc_bound(const ResonatorGeometry& geom, double r_q);

PlannerSheet build_sheet(const QubitSpec& q, const ResonatorGeometry& geom,
                         double delta_over_g = 10.0,
                         std::optional<double> g_listed = std::nullopt);

/// The three platforms discussed alongside the reference geometry.
std::vector<QubitSpec> reference_qubits();

}  // namespace planner
}  // namespace ndc
