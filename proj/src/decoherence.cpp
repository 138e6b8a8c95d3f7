#include "ndc/decoherence.hpp"

#include <cmath>

namespace ndc {
namespace decoherence {

namespace {

// Branch cavity amplitude at measurement time: alpha0 e^{-i pi mu} e^{-pi r_c/2}.
Eigen::VectorXcd branch_amplitudes_at_ti(SpinJ j, const CavityAmplitude& alpha, double r_c) {
    const cplx a0 = alpha.protocol_value() * std::exp(-0.5 * M_PI * r_c);
    Eigen::VectorXcd b(j.dimension());
    for (int p = 0; p < j.dimension(); ++p) {
        const double mu = MIndex::from_position(j, p).eigenvalue();
        b(p) = a0 * std::exp(cplx(0.0, -M_PI * mu));
    }
    return b;
}

// Diagonal second-measurement weights P^{(+)}_{k,k} = (1 + erf(+-a))/2 with the
// attenuated amplitude; sign tracks the parity label.
Eigen::VectorXd diag_plus_weights(SpinJ j, const CavityAmplitude& alpha, double r_c) {
    const double a = alpha.alpha0_mag * std::exp(-0.5 * M_PI * r_c);
    Eigen::VectorXd w(j.dimension());
    for (int p = 0; p < j.dimension(); ++p) {
        const double sgn = MIndex::from_position(j, p).is_even() ? 1.0 : -1.0;
        w(p) = 0.5 * (1.0 + std::erf(sgn * a));
    }
    return w;
}

struct SumParts {
    double p2_plus;
    double s_plus;  // P12(++) + P12(-+)
};

SumParts closed_sums(SpinJ j, double phi, const CavityAmplitude& alpha,
                     const DecoherenceRates& rates) {
    const int dim = j.dimension();
    const auto d = spin::wigner_d_matrix(j, phi);
    const Eigen::VectorXd col = d->col(0);
    const Eigen::VectorXd wk = diag_plus_weights(j, alpha, rates.r_c);
    const double a_att = alpha.alpha0_mag * std::exp(-0.5 * M_PI * rates.r_c);
    const double cross = std::exp(-2.0 * a_att * a_att);  // (P+ + P-) across parities

    // inner(m,n) = sum_k d_{k,m} d_{k,n} P+_{k,k}
    const Eigen::MatrixXd inner = d->transpose() * wk.asDiagonal() * (*d);

    double p2 = 0.0;
    cplx sp = 0.0;
    for (int pm = 0; pm < dim; ++pm) {
        const MIndex mi = MIndex::from_position(j, pm);
        for (int pn = 0; pn < dim; ++pn) {
            const MIndex ni = MIndex::from_position(j, pn);
            const int dl = mi.label() - ni.label();
            const double w = col(pm) * col(pn) * std::exp(-dl * dl * M_PI * rates.r_s);
            p2 += w * inner(pm, pn);
            const double pp = (dl % 2 == 0) ? 1.0 : cross;
            sp += w * pp * inner(pm, pn) * std::exp(-leak_phase_at(dl, rates.r_c, alpha.alpha0_mag, M_PI));
        }
    }
    return {p2, sp.real()};
}

}  // namespace

cplx leak_phase_at(int dl, double r_c, double alpha_mag, double t) {
    if (dl == 0 || r_c == 0.0) return 0.0;
    const double a2 = alpha_mag * alpha_mag;
    // gamma_c |a0|^2 [ (1 - e^{-gc t})/gc + (e^{-t(gc + i chi dl)} - 1)/(gc + i chi dl) ]
    // in chi = 1 units.
    const cplx den(r_c, static_cast<double>(dl));
    return a2 * (1.0 - std::exp(-r_c * t)) +
           a2 * r_c * (std::exp(-t * den) - 1.0) / den;
}

cplx leak_phase(MIndex m, MIndex n, const DecoherenceRates& rates, const CavityAmplitude& alpha) {
    return leak_phase_at(m.label() - n.label(), rates.r_c, alpha.alpha0_mag, M_PI);
}

BranchedJointState evolve_open(SpinJ j, double phi, const CavityAmplitude& alpha,
                               const DecoherenceRates& rates, double t) {
    if (t < 0.0) throw std::domain_error("evolve_open: negative time");
    const int dim = j.dimension();
    const Eigen::VectorXd col = spin::wigner_d_matrix(j, phi)->col(0);
    Eigen::MatrixXcd rho(dim, dim);
    Eigen::VectorXcd a(dim);
    const cplx a0 = alpha.protocol_value();
    for (int pm = 0; pm < dim; ++pm) {
        const MIndex mi = MIndex::from_position(j, pm);
        const double mum = mi.eigenvalue();
        a(pm) = a0 * std::exp(-(cplx(0.0, mum) + 0.5 * rates.r_c) * t);
        for (int pn = 0; pn < dim; ++pn) {
            const MIndex ni = MIndex::from_position(j, pn);
            const double mun = ni.eigenvalue();
            const int dl = mi.label() - ni.label();
            const cplx phase(0.0, 2.0 * (mum * mum - mun * mun) * t);
            rho(pm, pn) = col(pm) * col(pn) * std::exp(phase) *
                          std::exp(-dl * dl * rates.r_s * t) *
                          std::exp(-leak_phase_at(dl, rates.r_c, alpha.alpha0_mag, t));
        }
    }
    return {j, std::move(rho), std::move(a), t};
}

ProbabilityTable decohered_probabilities(SpinJ j, double phi, const CavityAmplitude& alpha,
                                         const DecoherenceRates& rates) {
    const int dim = j.dimension();
    const auto d = spin::wigner_d_matrix(j, phi);
    const Eigen::VectorXd col = d->col(0);
    const Eigen::VectorXcd beta = branch_amplitudes_at_ti(j, alpha, rates.r_c);
    const Eigen::VectorXd wplus = diag_plus_weights(j, alpha, rates.r_c);
    const Eigen::VectorXd wminus = Eigen::VectorXd::Ones(dim) - wplus;
    const Eigen::MatrixXd inner_p = d->transpose() * wplus.asDiagonal() * (*d);
    const Eigen::MatrixXd inner_m = d->transpose() * wminus.asDiagonal() * (*d);

    ProbabilityTable t;
    cplx acc[2][2] = {};
    cplx p2p = 0.0;
    for (int pm = 0; pm < dim; ++pm) {
        const MIndex mi = MIndex::from_position(j, pm);
        for (int pn = 0; pn < dim; ++pn) {
            const MIndex ni = MIndex::from_position(j, pn);
            const int dl = mi.label() - ni.label();
            const cplx w = col(pm) * col(pn) * std::exp(-dl * dl * M_PI * rates.r_s) *
                           std::exp(-leak_phase_at(dl, rates.r_c, alpha.alpha0_mag, M_PI));
            // first-measurement overlap split, by quadrature of the explicit
            // Gaussian integrand (closed forms exist only for the +- sum)
            const cplx i_plus = coherent::halfline_plus_quadrature(beta(pm), beta(pn));
            const cplx i_minus = coherent::overlap(beta(pm), beta(pn)) - i_plus;
            acc[0][0] += w * i_plus * inner_p(pm, pn);
            acc[0][1] += w * i_plus * inner_m(pm, pn);
            acc[1][0] += w * i_minus * inner_p(pm, pn);
            acc[1][1] += w * i_minus * inner_m(pm, pn);
            p2p += col(pm) * col(pn) * std::exp(-dl * dl * M_PI * rates.r_s) * inner_p(pm, pn);
        }
    }
    t.p2_plus = p2p.real();
    t.p2_minus = 1.0 - t.p2_plus;
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) t.p12[s1][s2] = acc[s1][s2].real();
    return t;
}

ViolationResult decohered_violation(SpinJ j, double phi, const CavityAmplitude& alpha,
                                    const DecoherenceRates& rates) {
    const SumParts s = closed_sums(j, phi, alpha, rates);
    const double v = s.p2_plus - s.s_plus;
    return {v, -v};
}

std::pair<double, double> optimal_alpha(SpinJ j, double phi, const DecoherenceRates& rates,
                                        const std::vector<double>& grid) {
    if (grid.empty()) throw std::domain_error("optimal_alpha: empty grid");
    double best_a = grid.front(), best_v = -1.0;
    for (double a : grid) {
        const double v = std::abs(decohered_violation(j, phi, CavityAmplitude(a), rates).v_plus);
        if (v > best_v + 1e-15 || (std::abs(v - best_v) <= 1e-15 && a < best_a)) {
            best_v = v;
            best_a = a;
        }
    }
    return {best_a, best_v};
}

}  // namespace decoherence
}  // namespace ndc
