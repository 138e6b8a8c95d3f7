#pragma once

#include "ndc/spin_math.hpp"

namespace ndc {

enum class Outcome { Plus = 0, Minus = 1 };

/// Outcome statistics of one protocol configuration: the no-first-measurement
/// branch P2(+-) and the joint table P12(s1, s2).
struct ProbabilityTable {
    double p2_plus = 0.0;
    double p2_minus = 0.0;
    double p12[2][2] = {{0.0, 0.0}, {0.0, 0.0}};  // [s1][s2]

    double& joint(Outcome s1, Outcome s2) { return p12[int(s1)][int(s2)]; }
    double joint(Outcome s1, Outcome s2) const { return p12[int(s1)][int(s2)]; }
    double joint_sum() const { return p12[0][0] + p12[0][1] + p12[1][0] + p12[1][1]; }
    /// Marginal of the first measurement.
    double first_marginal_plus() const { return p12[0][0] + p12[0][1]; }
    double v_plus() const { return p2_plus - (p12[0][0] + p12[1][0]); }
    double v_minus() const { return p2_minus - (p12[0][1] + p12[1][1]); }
    /// Entries in [0,1] and both branches normalized, within tol.
    bool is_valid(double tol = 1e-10) const;
};

struct ViolationResult {
    double v_plus = 0.0;
    double v_minus = 0.0;
    static ViolationResult from_table(const ProbabilityTable& t) {
        return {t.v_plus(), t.v_minus()};
    }
};

struct ProtocolAngles {
    double phi1 = 0.0;
    double phi2 = 0.0;
};

struct QuadratureSpec {
    double abs_tol = 1e-12;
    int max_depth = 40;
};

namespace ideal {

/// Closed-form table for equal rotation angles, all four spin branches.
ProbabilityTable ideal_probabilities(SpinJ j, double phi);

/// V+- closed form; V+ = -(s/4)(1 - cos(2 phi)^{2j}) with s the branch sign.
ViolationResult ideal_violation(SpinJ j, double phi);

/// Double/triple d-matrix parity sums for two independent rotation angles.
/// Reduces to ideal_probabilities when phi1 == phi2.
ProbabilityTable two_angle_probabilities(SpinJ j, const ProtocolAngles& angles);

/// Worst-case rotation error phi2 = pi/2 - phi1:
/// V+ = -(s/4) sin(2 phi1)^{2j}, all branches.
ViolationResult orthogonal_error_violation(SpinJ j, double phi1);

/// E_{dphi ~ N(0, sigma^2)} |V(pi/4 + dphi)| with the exact integrand,
/// by adaptive quadrature. Monotonically non-increasing in sigma.
double gaussian_averaged_violation(SpinJ j, double sigma_phi,
                                   const QuadratureSpec& spec = {});

/// Small-angle closed form 1/(4 sqrt(1 + 16 j sigma^2)) of the Gaussian
/// average of the exponential approximation, kept for comparison.
double gaussian_averaged_violation_smallangle(SpinJ j, double sigma_phi);

}  // namespace ideal
}  // namespace ndc
