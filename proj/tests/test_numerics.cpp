#include <doctest.h>

#include <cmath>

#include "ndc/coherent.hpp"
#include "ndc/numerics.hpp"

using namespace ndc;

TEST_CASE("complex erfc against frozen multiprecision references") {
    struct Ref {
        cplx z, v;
    };
    const Ref refs[] = {
        {{0.5, 1.2}, {-0.737238382004892251, -1.29047298183150883}},
        {{-1.1, 2.3}, {-11.404626793451606, 2.33049197357049147}},
        {{3.0, 4.0}, {121.186991395079444, 27.7503372936239025}},
        {{0.25, -0.75}, {0.526132440340454625, 0.946807713087750202}},
        {{-2.0, -1.5}, {1.96361758085729283, 0.0110033738521379502}},
        {{6.0, 0.5}, {2.69824674996225814e-17, 5.53103940527045381e-18}},
    };
    for (const auto& r : refs) {
        const cplx got = num::erfc_complex(r.z);
        CHECK(std::abs(got - r.v) <= 1e-12 * std::max(1.0, std::abs(r.v)));
    }
}

TEST_CASE("faddeeva against frozen references and the real axis") {
    CHECK(std::abs(num::faddeeva_w({1.0, 1.0}) - cplx(0.304744205256912592, 0.208218938202831627)) < 1e-13);
    CHECK(std::abs(num::faddeeva_w({2.5, 0.1}) - cplx(0.0146984068287895568, 0.250050395893536441)) < 1e-13);
    CHECK(std::abs(num::faddeeva_w({0.0, 3.0}) - cplx(0.17900115118138995, 0.0)) < 1e-13);
    for (double x : {-3.0, -0.7, 0.0, 0.4, 1.9, 4.2}) {
        // real axis: erfc(x) must match the standard library
        const cplx v = num::erfc_complex({x, 0.0});
        CHECK(v.real() == doctest::Approx(std::erfc(x)).epsilon(1e-13));
        CHECK(std::abs(v.imag()) < 1e-14);
    }
}

TEST_CASE("adaptive Simpson on analytic integrals") {
    const cplx g = num::adaptive_simpson(
        [](double x) { return cplx(std::exp(-x * x), 0.0); }, -8.0, 8.0, 1e-13);
    CHECK(std::abs(g.real() - std::sqrt(M_PI)) < 1e-12);
    const cplx osc = num::adaptive_simpson(
        [](double x) { return std::exp(cplx(0.0, 5.0 * x)) * std::exp(-x); }, 0.0, 40.0, 1e-13);
    CHECK(std::abs(osc - cplx(1.0, 5.0) / cplx(26.0, 0.0)) < 1e-11);
}

TEST_CASE("Gauss rules integrate polynomials and Gaussians exactly") {
    std::vector<double> x, w;
    num::gauss_legendre(8, x, w);
    double s = 0.0;
    for (int i = 0; i < 8; ++i) s += w[i] * std::pow(x[i], 14);  // degree 14 < 2*8
    CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
    num::gauss_hermite(32, x, w);
    double m2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m2 += w[i] * x[i] * x[i];
    CHECK(m2 == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("poisson weights sum to one and peak near lambda") {
    const auto p = num::poisson_weights(36.0, 120);
    double s = 0.0;
    for (double v : p) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p[36] > p[20]);
    CHECK(p[36] > p[55]);
}

TEST_CASE("halfline overlap closed form equals quadrature") {
    const cplx a0 = cplx(M_SQRT1_2, M_SQRT1_2) * 2.0;
    const cplx betas[] = {a0, -a0, a0 * std::exp(cplx(0.0, -0.37)), a0 * std::exp(cplx(0.0, 2.1)),
                          cplx(1.5, 0.0), cplx(-0.3, 2.2)};
    for (const cplx& bm : betas) {
        for (const cplx& bn : betas) {
            const cplx closed = coherent::halfline_plus(bm, bn);
            const cplx quad = coherent::halfline_plus_quadrature(bm, bn);
            CHECK(std::abs(closed - quad) < 1e-11);
            // completeness: plus + minus = full overlap
            const cplx total = closed + coherent::halfline_minus(bm, bn);
            CHECK(std::abs(total - coherent::overlap(bm, bn)) < 1e-13);
        }
    }
}

TEST_CASE("halfline overlap diagonal reduces to the real erf form") {
    for (double th : {0.0, 0.4, 1.3, 3.0}) {
        const cplx beta = 2.0 * std::exp(cplx(0.0, -th));
        const cplx v = coherent::halfline_plus(beta, beta);
        CHECK(std::abs(v.imag()) < 1e-13);
        CHECK(v.real() ==
              doctest::Approx(0.5 * (1.0 + std::erf(M_SQRT2 * beta.real()))).epsilon(1e-12));
    }
}

TEST_CASE("ipow handles negative bases and exponent parity") {
    CHECK(num::ipow(-0.5, 3) == doctest::Approx(-0.125));
    CHECK(num::ipow(-0.5, 4) == doctest::Approx(0.0625));
    CHECK(num::ipow(0.9, 0) == 1.0);
}
