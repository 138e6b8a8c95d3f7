#include <doctest.h>

#include <cmath>

#include "ndc/spin_math.hpp"

using namespace ndc;

namespace {

// Independent oracle: the explicit factorial-sum formula for d^j_{m',m}(beta),
// evaluated with log-factorials. Reliable up to 2j ~ 20 before cancellation.
double wigner_d_sum(int tj, int tm1, int tm2, double beta) {
    const int jpm1 = (tj + tm1) / 2, jmm1 = (tj - tm1) / 2;
    const int jpm2 = (tj + tm2) / 2, jmm2 = (tj - tm2) / 2;
    const double pref = 0.5 * (num::log_factorial(jpm1) + num::log_factorial(jmm1) +
                               num::log_factorial(jpm2) + num::log_factorial(jmm2));
    const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
    const int smin = std::max(0, (tm2 - tm1) / 2);
    const int smax = std::min(jpm2, jmm1);
    double acc = 0.0;
    for (int k = smin; k <= smax; ++k) {
        const double ln = pref - num::log_factorial(jpm2 - k) - num::log_factorial(k) -
                          num::log_factorial((tm1 - tm2) / 2 + k) - num::log_factorial(jmm1 - k);
        const int pow_c = jpm2 + jmm1 - 2 * k;          // 2j + m2 - m1 - 2k
        const int pow_s = (tm1 - tm2) / 2 + 2 * k;      // m1 - m2 + 2k
        double term = std::exp(ln) * num::ipow(c, pow_c) * num::ipow(s, pow_s);
        if ((((tm1 - tm2) / 2 + k) % 2 + 2) % 2 != 0) term = -term;
        acc += term;
    }
    return acc;
}

}  // namespace

TEST_CASE("SpinJ branch classification") {
    CHECK(SpinJ(4).branch() == SpinBranch::EvenInteger);   // j = 2
    CHECK(SpinJ(2).branch() == SpinBranch::OddInteger);    // j = 1
    CHECK(SpinJ(1).branch() == SpinBranch::HalfIntegerEvenN);  // j = 1/2, n = 0
    CHECK(SpinJ(3).branch() == SpinBranch::HalfIntegerOddN);   // j = 3/2, n = 1
    CHECK(SpinJ(4).branch_sign() == 1);
    CHECK(SpinJ(3).branch_sign() == 1);
    CHECK(SpinJ(2).branch_sign() == -1);
    CHECK(SpinJ(1).branch_sign() == -1);
    CHECK_THROWS_AS(SpinJ(0), std::domain_error);
}

TEST_CASE("MIndex parity labels, integer and half-integer") {
    const SpinJ j2(4);
    CHECK(MIndex(j2, -4).is_even());
    CHECK(!MIndex(j2, -2).is_even());
    CHECK(MIndex(j2, 0).is_even());
    // half-integer: label = (2m - 1)/2, eigenvalue label + 1/2
    const SpinJ jh(3);
    CHECK(MIndex(jh, 1).label() == 0);    // eigenvalue +1/2 -> label 0, even
    CHECK(MIndex(jh, 1).is_even());
    CHECK(MIndex(jh, -1).label() == -1);  // eigenvalue -1/2 -> label -1, odd
    CHECK(!MIndex(jh, -1).is_even());
    CHECK(MIndex(jh, -3).label() == -2);
    CHECK(MIndex(jh, -3).is_even());
    CHECK_THROWS_AS(MIndex(j2, 3), std::domain_error);
    CHECK_THROWS_AS(MIndex(j2, 6), std::domain_error);
}

TEST_CASE("wigner_d matches the explicit sum oracle for 2j <= 20") {
    for (int tj : {1, 2, 3, 4, 7, 10, 15, 20}) {
        const SpinJ j(tj);
        for (double beta : {0.0, 0.3, M_PI / 2, 1.9, M_PI, 4.4}) {
            const auto d = spin::wigner_d_matrix(j, beta);
            for (int p1 = 0; p1 < j.dimension(); ++p1)
                for (int p2 = 0; p2 < j.dimension(); ++p2) {
                    const int tm1 = -tj + 2 * p1, tm2 = -tj + 2 * p2;
                    CHECK((*d)(p1, p2) ==
                          doctest::Approx(wigner_d_sum(tj, tm1, tm2, beta)).epsilon(1e-11));
                }
        }
    }
}

TEST_CASE("wigner_d spec examples") {
    const SpinJ j2(4);
    CHECK(spin::wigner_d(j2, MIndex(j2, -4), MIndex(j2, -4), M_PI / 2) ==
          doctest::Approx(0.25).epsilon(1e-14));  // cos^4(pi/4)
    // beta = 0 is the identity
    const SpinJ j3(6);
    for (int p1 = 0; p1 < 7; ++p1)
        for (int p2 = 0; p2 < 7; ++p2)
            CHECK(spin::wigner_d(j3, MIndex::from_position(j3, p1), MIndex::from_position(j3, p2),
                                 0.0) == doctest::Approx(p1 == p2 ? 1.0 : 0.0));
    const SpinJ j1(2);
    CHECK(spin::wigner_d(j1, MIndex(j1, 0), MIndex(j1, 0), 0.7) ==
          doctest::Approx(std::cos(0.7)).epsilon(1e-14));
}

TEST_CASE("closed forms at the matrix corners up to 2j = 200") {
    for (int tj : {1, 3, 10, 57, 120, 200}) {
        const SpinJ j(tj);
        for (double beta : {0.2, 1.1, 2.7}) {
            const auto d = spin::wigner_d_matrix(j, beta);
            CHECK(std::abs((*d)(0, 0) - num::ipow(std::cos(0.5 * beta), tj)) < 1e-12);
            CHECK(std::abs((*d)(0, tj) - num::ipow(std::sin(0.5 * beta), tj)) < 1e-12);
            // d_{j,-j} = (-1)^{2j} d_{-j,j}
            const double sign = (tj % 2 == 0) ? 1.0 : -1.0;
            CHECK(std::abs((*d)(tj, 0) - sign * num::ipow(std::sin(0.5 * beta), tj)) < 1e-12);
        }
    }
}

TEST_CASE("unitarity and composition") {
    for (int tj : {5, 24, 100}) {
        const SpinJ j(tj);
        const double b1 = 0.8, b2 = 1.7;
        const auto d1 = spin::wigner_d_matrix(j, b1);
        const auto d2 = spin::wigner_d_matrix(j, b2);
        const auto d12 = spin::wigner_d_matrix(j, b1 + b2);
        const Eigen::MatrixXd eye = d1->transpose() * (*d1);
        CHECK((eye - Eigen::MatrixXd::Identity(j.dimension(), j.dimension())).cwiseAbs().maxCoeff() <
              1e-10);
        CHECK((((*d1) * (*d2)) - (*d12)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("wigner_d_column norm and unit vector at beta = 0") {
    const SpinJ j(4);
    const auto col = spin::wigner_d_column(j, MIndex(j, -4), M_PI / 2);
    CHECK(col.squaredNorm() == doctest::Approx(1.0).epsilon(1e-13));
    const auto col0 = spin::wigner_d_column(j, MIndex(j, 2), 0.0);
    CHECK(col0(3) == doctest::Approx(1.0));
    CHECK(col0.squaredNorm() == doctest::Approx(1.0));
    // j = 1/2 column against the elementary rotation
    const SpinJ jh(1);
    const auto ch = spin::wigner_d_column(jh, MIndex(jh, -1), M_PI / 2);
    CHECK(ch(0) == doctest::Approx(std::cos(M_PI / 4)).epsilon(1e-14));
    CHECK(std::abs(ch(1)) == doctest::Approx(std::sin(M_PI / 4)).epsilon(1e-14));
}

TEST_CASE("spin coherent state: ground state, amplitudes, parity symmetry") {
    const SpinJ j(4);
    const auto ground = spin::spin_coherent_state(j, 0.0);
    CHECK(std::abs(ground.amplitudes(0) - cplx(1.0, 0.0)) < 1e-15);
    const auto s = spin::spin_coherent_state(j, M_PI / 4);
    CHECK(std::abs(s.amplitudes(0).real() - num::ipow(std::cos(M_PI / 8), 4)) < 1e-14);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-13));
    // amplitudes of state(-phi) = (-1)^{m+j} amplitudes of state(phi)
    for (int tj : {4, 3}) {
        const SpinJ jj(tj);
        const auto plus = spin::spin_coherent_state(jj, 0.9);
        const auto minus = spin::spin_coherent_state(jj, -0.9);
        for (int p = 0; p < jj.dimension(); ++p) {
            const int mpj = (MIndex::from_position(jj, p).twice_m() + tj) / 2;  // m + j
            const double sign = (mpj % 2 == 0) ? 1.0 : -1.0;
            CHECK(std::abs(minus.amplitudes(p) - sign * plus.amplitudes(p)) < 1e-12);
        }
    }
}

TEST_CASE("rotate: definition, identity, composition") {
    const SpinJ j(5);
    const auto ground = spin::spin_coherent_state(j, 0.0);
    const auto direct = spin::spin_coherent_state(j, 1.1);
    const auto rotated = spin::rotate(ground, 1.1);
    CHECK((rotated.amplitudes - direct.amplitudes).norm() < 1e-13);
    const auto same = spin::rotate(direct, 0.0);
    CHECK((same.amplitudes - direct.amplitudes).norm() < 1e-15);
    const auto two_step = spin::rotate(spin::spin_coherent_state(j, M_PI / 4), M_PI / 4);
    const auto one_step = spin::spin_coherent_state(j, M_PI / 2);
    CHECK((two_step.amplitudes - one_step.amplitudes).norm() < 1e-10);
    CHECK(two_step.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parity projection: completeness, orthogonality, norm split") {
    for (int tj : {4, 2, 3, 1, 7}) {
        const SpinJ j(tj);
        const auto s = spin::spin_coherent_state(j, 0.83);
        const auto even = spin::parity_project(s, Parity::Even);
        const auto odd = spin::parity_project(s, Parity::Odd);
        CHECK((even.amplitudes + odd.amplitudes - s.amplitudes).norm() < 1e-15);
        CHECK(std::abs(even.amplitudes.dot(odd.amplitudes)) < 1e-15);
        CHECK(even.norm() * even.norm() + odd.norm() * odd.norm() ==
              doctest::Approx(1.0).epsilon(1e-12));
        // norm split: |even|^2 = 1/2 + (s/2) cos^{2j}(phi)
        const double expect = 0.5 + 0.5 * j.branch_sign() * num::ipow(std::cos(0.83), tj);
        CHECK(even.norm() * even.norm() == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("even projection equals the mirror superposition for even integer j") {
    const SpinJ j(4);
    const double phi = 0.62;
    const auto even = spin::parity_project(spin::spin_coherent_state(j, phi), Parity::Even);
    const auto mirror = spin::spin_coherent_state(j, -phi);
    const auto plus = spin::spin_coherent_state(j, phi);
    for (int p = 0; p < j.dimension(); ++p)
        CHECK(std::abs(2.0 * even.amplitudes(p) - (plus.amplitudes(p) + mirror.amplitudes(p))) <
              1e-13);
}

TEST_CASE("husimi: self-overlap, mirror symmetry of the even cat, orthogonal probe") {
    const SpinJ j(20);
    const double phi0 = 0.7;
    const auto s = spin::spin_coherent_state(j, phi0);
    CHECK(spin::husimi_q(s, phi0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    auto even = spin::parity_project(s, Parity::Even);
    even.amplitudes /= even.norm();
    CHECK(spin::husimi_q(even, -phi0, 0.0) ==
          doctest::Approx(spin::husimi_q(even, phi0, 0.0)).epsilon(1e-11));
    CHECK(spin::husimi_q(s, phi0 + M_PI, 0.0) < 1e-10);
    SpinVector unnorm = s;
    unnorm.amplitudes *= 0.5;
    CHECK_THROWS_AS(spin::husimi_q(unnorm, 0.0, 0.0), std::domain_error);
}
