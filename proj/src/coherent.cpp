#include "ndc/coherent.hpp"

#include <cmath>

namespace ndc {
namespace coherent {

cplx overlap(cplx beta_m, cplx beta_n) {
    return std::exp(-0.5 * std::norm(beta_m) - 0.5 * std::norm(beta_n) +
                    std::conj(beta_n) * beta_m);
}

cplx halfline_plus(cplx beta_m, cplx beta_n) {
    const double x0m = M_SQRT2 * beta_m.real(), p0m = M_SQRT2 * beta_m.imag();
    const double x0n = M_SQRT2 * beta_n.real(), p0n = M_SQRT2 * beta_n.imag();
    const double C = p0m - p0n;
    const double mu = 0.5 * (x0m + x0n);
    const cplx mu_t(mu, 0.5 * C);
    // (1/sqrt(pi)) Int_0^inf e^{-(x-x0m)^2/2 - (x-x0n)^2/2 + iCx} dx * phase
    //   = (1/2) e^G erfc(-mu_t)
    const cplx G = cplx(-0.25 * (x0m - x0n) * (x0m - x0n) - 0.25 * C * C,
                        C * mu - 0.5 * (p0m * x0m - p0n * x0n));
    if (mu <= 0.0) {
        // erfc(-mu_t) = e^{-mu_t^2} w(-i mu_t), upper half plane since Re mu_t <= 0
        const cplx w = num::faddeeva_w(cplx(mu_t.imag(), -mu_t.real()));
        return 0.5 * std::exp(G - mu_t * mu_t) * w;
    }
    const cplx w = num::faddeeva_w(cplx(-mu_t.imag(), mu_t.real()));
    return std::exp(G) - 0.5 * std::exp(G - mu_t * mu_t) * w;
}

cplx halfline_minus(cplx beta_m, cplx beta_n) {
    return overlap(beta_m, beta_n) - halfline_plus(beta_m, beta_n);
}

cplx halfline_plus_quadrature(cplx beta_m, cplx beta_n, double abs_tol) {
    const double x0m = M_SQRT2 * beta_m.real(), p0m = M_SQRT2 * beta_m.imag();
    const double x0n = M_SQRT2 * beta_n.real(), p0n = M_SQRT2 * beta_n.imag();
    const double C = p0m - p0n;
    const double mu = 0.5 * (x0m + x0n);
    const cplx phase(0.0, -0.5 * (p0m * x0m - p0n * x0n));
    auto f = [&](double x) {
        const cplx e(-0.5 * (x - x0m) * (x - x0m) - 0.5 * (x - x0n) * (x - x0n),
                     C * x);
        return std::exp(e + phase) / std::sqrt(M_PI);
    };
    const double hi = std::max(0.0, mu) + 10.0;
    return num::adaptive_simpson(f, 0.0, hi, abs_tol);
}

}  // namespace coherent
}  // namespace ndc
