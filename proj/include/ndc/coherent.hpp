#pragma once

#include "ndc/numerics.hpp"

namespace ndc {

/// Overlaps of cavity coherent states against the sign-of-x homodyne
/// projectors, x = (a + a^dag)/sqrt(2). Position-space wavefunction
/// convention: <x|b> = pi^{-1/4} exp(-(x - x0)^2/2 + i p0 x - i p0 x0 / 2)
/// with x0 = sqrt(2) Re b, p0 = sqrt(2) Im b.
namespace coherent {

/// <b_n | b_m> full overlap.
cplx overlap(cplx beta_m, cplx beta_n);

/// <b_n | Pi_+ | b_m> with Pi_+ = Int_0^inf |x><x| dx. Closed erf/exp form;
/// exponents are combined before exponentiation so large amplitudes stay
/// in range.
cplx halfline_plus(cplx beta_m, cplx beta_n);

/// <b_n | Pi_- | b_m> = overlap - halfline_plus.
cplx halfline_minus(cplx beta_m, cplx beta_n);

/// Same integral evaluated by adaptive quadrature on the real x line;
/// used as the slow reference route.
cplx halfline_plus_quadrature(cplx beta_m, cplx beta_n, double abs_tol = 1e-13);

}  // namespace coherent
}  // namespace ndc
