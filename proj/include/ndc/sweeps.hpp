#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "ndc/ideal_protocol.hpp"
#include "ndc/inhomogeneity.hpp"
#include "ndc/planner.hpp"

namespace ndc {

inline constexpr const char* kVersion = "0.1.0";

/// "start:end:count" grid, half-open [start, end), with symbolic pi accepted
/// in the endpoints ("0:pi:128", "0:2pi:64", "pi/4:3pi/4:32").
struct GridSpec {
    double start = 0.0;
    double end = 0.0;
    int count = 0;

    static GridSpec parse(const std::string& text);
    std::vector<double> points() const;
};

/// Parse a single scalar that may use the symbolic pi forms.
double parse_angle(const std::string& text);

/// Comma-separated integer list ("4,20").
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

/// One table written as CSV ('#' header comment lines carrying the full
/// parameter set, 17-significant-digit floats) or as a JSON object.
struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> params;  // recorded in the header

    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;
};

namespace sweeps {

struct IdealConfig {
    std::vector<int> twice_j;
    GridSpec phi;
};
SweepTable run_ideal_sweep(const IdealConfig& cfg);

struct TwoAngleConfig {
    std::vector<int> twice_j;
    GridSpec phi1;
    GridSpec phi2;
};
SweepTable run_two_angle_sweep(const TwoAngleConfig& cfg);

struct RotationErrorConfig {
    std::vector<int> twice_j;
    GridSpec sigma_phi;
};
SweepTable run_rotation_error_sweep(const RotationErrorConfig& cfg);

struct DecoherenceConfig {
    std::vector<int> twice_j;
    std::vector<double> rc;  // singleton or grid
    std::vector<double> rs;
    double alpha0 = 2.0;
    double phi = M_PI / 4.0;
};
SweepTable run_decoherence_sweep(const DecoherenceConfig& cfg);

/// Default r_c grid whose leftmost point anchors the small-decay limit.
std::vector<double> default_rc_grid();

struct InhomogeneityConfig {
    int N = 24;
    std::vector<double> r_sigma;
    std::vector<int> n_groups;
    double mean_g = 1.0;
    double alpha0 = 2.0;
    int seeds = 32;
    std::uint64_t seed_base = 1;
};
SweepTable run_inhomogeneity_sweep(const InhomogeneityConfig& cfg);

struct PlannerConfig {
    std::vector<QubitSpec> qubits;  // empty = the three reference platforms
    double delta_over_g = 10.0;
};
std::vector<PlannerSheet> run_planner(const PlannerConfig& cfg);
void write_planner_text(std::ostream& os, const std::vector<PlannerSheet>& sheets);
void write_planner_json(std::ostream& os, const std::vector<PlannerSheet>& sheets);

struct OracleCheckOptions {
    double tolerance_scale = 1.0;
    std::optional<int> n_max_override;
};
struct CheckResult {
    std::string name;
    double delta = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};
/// Oracle-vs-analytic regression suite; resource errors surface as
/// ndc::resource_error rather than failed checks.
std::vector<CheckResult> run_oracle_check(const OracleCheckOptions& opt);
void write_check_json(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace sweeps
}  // namespace ndc
