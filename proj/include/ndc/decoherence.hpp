#pragma once

#include "ndc/coherent.hpp"
#include "ndc/ideal_protocol.hpp"

namespace ndc {

/// Cavity decay and spin dephasing in units of the dispersive coupling chi.
struct DecoherenceRates {
    double r_c = 0.0;  // gamma_c / chi
    double r_s = 0.0;  // gamma_s / chi
    DecoherenceRates(double rc, double rs) : r_c(rc), r_s(rs) {
        if (rc < 0.0 || rs < 0.0 || !std::isfinite(rc) || !std::isfinite(rs))
            throw std::domain_error("DecoherenceRates: rates must be finite and >= 0");
    }
};

/// Measurement-cavity amplitude. The protocol uses alpha0 = (1+i)/sqrt(2)*|alpha0|,
/// which makes the homodyne sign track the parity label for integer and
/// half-integer spins alike.
struct CavityAmplitude {
    double alpha0_mag;
    explicit CavityAmplitude(double mag) : alpha0_mag(mag) {
        if (!(mag > 0.0)) throw std::domain_error("CavityAmplitude: |alpha0| must be > 0");
    }
    cplx protocol_value() const { return cplx(M_SQRT1_2, M_SQRT1_2) * alpha0_mag; }
};

/// Analytically solved open-system state during one entangling window:
/// coefficient matrix rho_{m,n} plus the per-branch coherent amplitude
/// alpha_m(t) = alpha0 e^{-(i m chi + gamma_c/2) t}. Time in 1/chi units.
struct BranchedJointState {
    SpinJ j;
    Eigen::MatrixXcd rho;         // coefficients over (m, n), ascending m
    Eigen::VectorXcd alpha;       // branch amplitudes
    double t = 0.0;

    double trace() const { return rho.diagonal().real().sum(); }
    bool is_hermitian(double tol = 1e-10) const {
        return (rho - rho.adjoint()).cwiseAbs().maxCoeff() <= tol;
    }
};

namespace decoherence {

/// Cavity-leak exponent D_{m,n}(r_c) at t_I = pi/chi. m, n enter through the
/// integer label difference only. The r_c -> 0 and m == n limits are taken
/// analytically.
cplx leak_phase(MIndex m, MIndex n, const DecoherenceRates& rates,
                const CavityAmplitude& alpha);

/// Same exponent at a general time t (1/chi units), label difference dl.
cplx leak_phase_at(int dl, double r_c, double alpha_mag, double t);

/// Solved master-equation state at time t for the first entangling window,
/// starting from |phi> x |alpha0>.
BranchedJointState evolve_open(SpinJ j, double phi, const CavityAmplitude& alpha,
                               const DecoherenceRates& rates, double t_in_inv_chi);

/// Protocol statistics under decoherence. The +- split of the first
/// measurement uses the quadrature route for the off-diagonal overlaps,
/// so this is the slower full-table path.
ProbabilityTable decohered_probabilities(SpinJ j, double phi, const CavityAmplitude& alpha,
                                         const DecoherenceRates& rates);

/// V from the summed closed forms only (no +- split needed); fast path.
ViolationResult decohered_violation(SpinJ j, double phi, const CavityAmplitude& alpha,
                                    const DecoherenceRates& rates);

/// Grid search for the cavity amplitude maximizing |V+|; ties go to the
/// smaller amplitude.
std::pair<double, double> optimal_alpha(SpinJ j, double phi, const DecoherenceRates& rates,
                                        const std::vector<double>& grid);

}  // namespace decoherence
}  // namespace ndc
