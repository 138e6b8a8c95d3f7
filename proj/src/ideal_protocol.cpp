#include "ndc/ideal_protocol.hpp"

#include <cmath>

namespace ndc {

bool ProbabilityTable::is_valid(double tol) const {
    auto in_range = [tol](double p) { return p >= -tol && p <= 1.0 + tol; };
    if (!in_range(p2_plus) || !in_range(p2_minus)) return false;
    for (const auto& row : p12)
        for (double p : row)
            if (!in_range(p)) return false;
    return std::abs(p2_plus + p2_minus - 1.0) <= tol && std::abs(joint_sum() - 1.0) <= tol;
}

namespace ideal {

ProbabilityTable ideal_probabilities(SpinJ j, double phi) {
    const int tj = j.twice_j();
    const int s = j.branch_sign();
    const double c1 = num::ipow(std::cos(phi), tj);
    const double c2 = num::ipow(std::cos(2.0 * phi), tj);
    ProbabilityTable t;
    t.p2_plus = 0.5 + 0.5 * s * c2;
    t.p2_minus = 1.0 - t.p2_plus;
    const double big_p = 3.0 / 8.0 + 0.5 * c1 + c2 / 8.0;
    const double big_m = 3.0 / 8.0 - 0.5 * c1 + c2 / 8.0;
    const double small = 1.0 / 8.0 - c2 / 8.0;
    if (s > 0) {
        t.joint(Outcome::Plus, Outcome::Plus) = big_p;
        t.joint(Outcome::Minus, Outcome::Plus) = big_m;
        t.joint(Outcome::Plus, Outcome::Minus) = small;
        t.joint(Outcome::Minus, Outcome::Minus) = small;
    } else {
        t.joint(Outcome::Plus, Outcome::Plus) = small;
        t.joint(Outcome::Minus, Outcome::Plus) = small;
        t.joint(Outcome::Plus, Outcome::Minus) = big_m;
        t.joint(Outcome::Minus, Outcome::Minus) = big_p;
    }
    return t;
}

ViolationResult ideal_violation(SpinJ j, double phi) {
    const double c2 = num::ipow(std::cos(2.0 * phi), j.twice_j());
    const double v = -j.branch_sign() * 0.25 * (1.0 - c2);
    return {v, -v};
}

ProbabilityTable two_angle_probabilities(SpinJ j, const ProtocolAngles& angles) {
    const int dim = j.dimension();
    const auto d2 = spin::wigner_d_matrix(j, angles.phi2);
    const Eigen::VectorXd col1 = spin::wigner_d_matrix(j, angles.phi1)->col(0);
    const Eigen::VectorXd col12 = spin::wigner_d_matrix(j, angles.phi1 + angles.phi2)->col(0);

    std::vector<bool> even(dim);
    for (int p = 0; p < dim; ++p) even[p] = MIndex::from_position(j, p).is_even();

    ProbabilityTable t;
    for (int p = 0; p < dim; ++p)
        (even[p] ? t.p2_plus : t.p2_minus) += col12(p) * col12(p);

    // P12(s1,s2) = sum_{m' in s2} ( sum_{m in s1} d_{m',m}(phi2) d_{m,-j}(phi1) )^2,
    // the rank-factored form of the double parity sums.
    for (int s1 = 0; s1 < 2; ++s1) {
        Eigen::VectorXd masked = col1;
        for (int p = 0; p < dim; ++p)
            if (even[p] != (s1 == 0)) masked(p) = 0.0;
        const Eigen::VectorXd w = (*d2) * masked;
        for (int p = 0; p < dim; ++p)
            t.p12[s1][even[p] ? 0 : 1] += w(p) * w(p);
    }
    return t;
}

ViolationResult orthogonal_error_violation(SpinJ j, double phi1) {
    const double v = -j.branch_sign() * 0.25 * num::ipow(std::sin(2.0 * phi1), j.twice_j());
    return {v, -v};
}

double gaussian_averaged_violation(SpinJ j, double sigma_phi, const QuadratureSpec& spec) {
    if (sigma_phi < 0.0) throw std::domain_error("gaussian_averaged_violation: sigma < 0");
    if (sigma_phi == 0.0) return 0.25;
    const int tj = j.twice_j();
    // |V(pi/4 + x)| = (1/4)|sin(pi/2 + 2x)|^{2j} = (1/4)|cos(2x)|^{2j}
    auto f = [&](double x) -> cplx {
        const double g = std::exp(-0.5 * x * x / (sigma_phi * sigma_phi)) /
                         (sigma_phi * std::sqrt(2.0 * M_PI));
        return cplx(0.25 * std::pow(std::abs(std::cos(2.0 * x)), tj) * g, 0.0);
    };
    // Integrand support: Gaussian tail beyond 10 sigma is < 1e-23.
    const double lim = 10.0 * sigma_phi;
    const cplx r = num::adaptive_simpson(f, -lim, lim, spec.abs_tol, spec.max_depth);
    return r.real();
}

double gaussian_averaged_violation_smallangle(SpinJ j, double sigma_phi) {
    return 0.25 / std::sqrt(1.0 + 8.0 * j.twice_j() * sigma_phi * sigma_phi);
}

}  // namespace ideal
}  // namespace ndc
