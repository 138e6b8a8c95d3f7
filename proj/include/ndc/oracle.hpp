#pragma once

#include <optional>

#include "ndc/decoherence.hpp"
#include "ndc/inhomogeneity.hpp"

namespace ndc {
namespace oracle {

/// Truncated Fock space with the coherent-tail cutoff rule
/// n_max >= ceil(|a|^2 + 10 |a|).
struct FockSpace {
    int n_max;
    explicit FockSpace(int nmax) : n_max(nmax) {
        if (nmax < 1) throw std::domain_error("FockSpace: n_max >= 1");
    }
    int dim() const { return n_max + 1; }
    static int required_cutoff(double alpha_mag) {
        return static_cast<int>(std::ceil(alpha_mag * alpha_mag + 10.0 * alpha_mag));
    }
    void check_adequate(double alpha_mag) const {
        if (n_max < required_cutoff(alpha_mag))
            throw resource_error("FockSpace: n_max " + std::to_string(n_max) +
                                 " below the cutoff rule " +
                                 std::to_string(required_cutoff(alpha_mag)) + " for |alpha| " +
                                 std::to_string(alpha_mag));
    }
};

/// Coherent state in the number basis, amplitudes from log-space recursion.
Eigen::VectorXcd coherent_vector(cplx alpha, int n_max);

/// Truncation leakage 1 - |c|^2 of a coherent vector.
double coherent_leakage(const Eigen::VectorXcd& v);

/// Sign-of-x homodyne POVM over the number basis. Pi_+ is assembled from
/// half-line integrals of the oscillator eigenfunctions on a composite
/// Gauss-Legendre grid; Pi_- follows from the parity reflection
/// Pi_- = S Pi_+ S, S = diag((-1)^n), so completeness is a real check of the
/// quadrature rather than an identity by construction.
struct HomodynePOVM {
    Eigen::MatrixXd plus;
    Eigen::MatrixXd minus;
    static HomodynePOVM build(int n_max);
};

/// Pure joint state, spin-major coefficient matrix c(m, n_fock).
struct JointState {
    SpinJ j;
    FockSpace fock;
    Eigen::MatrixXcd c;

    double norm2() const { return c.squaredNorm(); }
};

JointState make_joint(const SpinVector& spin, const Eigen::VectorXcd& cavity, FockSpace fock);

/// exp(-i chi_t (a^dag a Jz - 2 Jz^2)) applied diagonally (the J^2 piece is a
/// global phase on a fixed-j irrep).
JointState dispersive_evolve(const JointState& state, double chi_t);

struct MeasureResult {
    double p_plus = 0.0;
    double p_minus = 0.0;
    Eigen::MatrixXcd rho_plus;   // unnormalized post-measurement spin state
    Eigen::MatrixXcd rho_minus;
};

MeasureResult homodyne_probabilities(const JointState& state, const HomodynePOVM& povm);

/// Five-stage protocol at finite cavity amplitude; converges to the
/// closed-form tables as |alpha0| grows.
ProbabilityTable full_protocol_exact(SpinJ j, double phi1, double phi2,
                                     const CavityAmplitude& alpha,
                                     std::optional<int> n_max = std::nullopt);

/// Joint density matrix over spin (x) truncated Fock.
struct JointDensity {
    SpinJ j;
    FockSpace fock;
    Eigen::MatrixXcd rho;  // (ds*F) x (ds*F), spin-major
};

/// RK4 integration of the dispersive master equation (chi = 1 units) from
/// |phi> x |alpha0>, with cavity decay r_c and spin dephasing r_s. The
/// dephasing dissipator is normalized so that coherences damp as
/// e^{-(m-n)^2 r_s t}, matching the solved dynamics.
JointDensity lindblad_rk4(SpinJ j, double phi, const CavityAmplitude& alpha,
                          const DecoherenceRates& rates, double chi_t_final, int steps,
                          std::optional<int> n_max = std::nullopt);

/// Step-halving wrapper: doubles steps until the trace distance between
/// consecutive refinements drops below tol.
JointDensity lindblad_rk4_auto(SpinJ j, double phi, const CavityAmplitude& alpha,
                               const DecoherenceRates& rates, double chi_t_final,
                               double tol = 1e-6, std::optional<int> n_max = std::nullopt);

/// Branch-form analytic state expanded onto the truncated Fock basis.
Eigen::MatrixXcd analytic_joint_density(const BranchedJointState& state, int n_max);

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Exact 2^N-level protocol under sum_i (2 g_i^2/Delta) a^dag a sigma_z^i,
/// optionally with the flip-flop (XY) term of the same second-order expansion
/// (hopping 8 g_i g_j / Delta, the normalization whose uniform-coupling limit
/// is 2 chi (J^2 - Jz^2)). Rotation angles and the interaction time are
/// calibrated on the sample mean, so the detuning cancels out.
ProbabilityTable qubit_level_protocol(const CouplingSample& couplings, bool include_xy,
                                      const CavityAmplitude& alpha,
                                      std::optional<int> n_max = std::nullopt,
                                      double phi_bar = M_PI / 4.0);

/// Evolves |j,-j> x |-i alpha_r> under the resonant exchange Hamiltonian
/// g (a J+ + a^dag J-) and returns the fidelity of the reduced spin state
/// against rotate(ground, 2 g alpha_r t).
double resonant_rotation_check(SpinJ j, double g, double alpha_r, double t,
                               std::optional<int> n_max = std::nullopt);

struct DisturbanceReport {
    ProbabilityTable table;
    /// Trace distance between the reduced spin state after the single
    /// measurement branch's first window treatment and the pre-window state.
    double first_window_disturbance = 0.0;
};

/// Classical-disturbance mitigation variants: method 1 keeps three entangling
/// windows in both branches; method 2 feeds the even cat state into the first
/// window of the single-measurement branch.
DisturbanceReport disturbance_method_check(SpinJ j, double phi, const CavityAmplitude& alpha,
                                           int method, std::optional<int> n_max = std::nullopt);

}  // namespace oracle
}  // namespace ndc
