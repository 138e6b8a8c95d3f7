#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ndc {

using cplx = std::complex<double>;

/// Thrown when a computation would exceed a configured resource cap
/// (joint-state dimension, Fock truncation, ...). Distinct from domain
/// errors so callers can map it to a dedicated exit code.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

namespace num {

/// ln(n!) via lgamma.
double log_factorial(int n);

/// Integer power by squaring. Exact sign handling for negative bases.
double ipow(double base, int n);

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz), accurate to ~1e-13
/// uniformly on the complex plane (Weideman rational approximation with
/// N = 64 terms plus the standard reflection for Im z < 0).
cplx faddeeva_w(cplx z);

/// Complementary error function of a complex argument.
cplx erfc_complex(cplx z);

/// (1/sqrt(pi)) * Int_0^inf exp(-(x - mu)^2) dx = erfc(-mu)/2 for complex mu.
cplx half_gaussian(cplx mu);

/// Adaptive Simpson quadrature for complex-valued integrands on [a, b].
/// Throws std::runtime_error if the requested tolerance cannot be met
/// within max_depth bisections.
cplx adaptive_simpson(const std::function<cplx(double)>& f, double a, double b,
                      double abs_tol = 1e-13, int max_depth = 48);

/// Gauss-Legendre nodes/weights on [-1, 1] (Golub-Welsch).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Gauss-Hermite nodes/weights for weight exp(-t^2) (Golub-Welsch).
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Poisson(lambda) probabilities p_0..p_cut, computed in log space.
std::vector<double> poisson_weights(double lambda, int cut);

}  // namespace num
}  // namespace ndc
