#include "ndc/numerics.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace ndc {
namespace num {

double log_factorial(int n) {
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double ipow(double base, int n) {
    if (n < 0) return 1.0 / ipow(base, -n);
    double r = 1.0, b = base;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Faddeeva function, Weideman (SIAM Rev. 36, 1994) rational expansion,
// N = 64 terms; coefficients from the length-2M DFT of
// f(theta) = exp(-t^2)(L^2 + t^2), t = L tan(theta/2), theta_k = k pi / M.
// ---------------------------------------------------------------------------
namespace {

constexpr int kWeidemanN = 64;

struct WeidemanTable {
    double L = 0.0;
    std::vector<double> a;  // highest-order coefficient first
};

const WeidemanTable& weideman_table() {
    static WeidemanTable tab = [] {
        WeidemanTable t;
        const int N = kWeidemanN;
        const int M = 2 * N;
        t.L = std::sqrt(N / std::sqrt(2.0));
        t.a.assign(N, 0.0);
        for (int n = 1; n <= N; ++n) {
            double acc = 0.0;
            for (int k = -M + 1; k <= M - 1; ++k) {
                const double tt = t.L * std::tan(0.5 * k * M_PI / M);
                const double fk = std::exp(-tt * tt) * (t.L * t.L + tt * tt);
                acc += fk * std::cos(M_PI * n * k / static_cast<double>(M));
            }
            t.a[N - n] = acc / (2.0 * M);
        }
        return t;
    }();
    return tab;
}

cplx faddeeva_upper(cplx z) {
    const WeidemanTable& t = weideman_table();
    const cplx iz(-z.imag(), z.real());
    const cplx den = t.L - iz;
    const cplx Z = (t.L + iz) / den;
    cplx p = 0.0;
    for (double c : t.a) p = p * Z + c;
    return 2.0 * p / (den * den) + (1.0 / std::sqrt(M_PI)) / den;
}

}  // namespace

cplx faddeeva_w(cplx z) {
    if (z.imag() >= 0.0) return faddeeva_upper(z);
    return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);  // w(z) + w(-z) = 2 e^{-z^2}
}

cplx erfc_complex(cplx z) {
    if (z.real() >= 0.0) {
        return std::exp(-z * z) * faddeeva_upper(cplx(-z.imag(), z.real()));
    }
    return 2.0 - erfc_complex(-z);
}

cplx half_gaussian(cplx mu) {
    return 0.5 * erfc_complex(-mu);
}

cplx adaptive_simpson(const std::function<cplx(double)>& f, double a, double b,
                      double abs_tol, int max_depth) {
    struct Rec {
        const std::function<cplx(double)>& f;
        cplx run(double a, double b, cplx fa, cplx fm, cplx fb, cplx whole,
                 double tol_here, int depth) const {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const cplx flm = f(lm), frm = f(rm);
            const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const cplx delta = left + right - whole;
            if (std::abs(delta) <= 15.0 * tol_here || depth <= 0) {
                if (depth <= 0 && std::abs(delta) > 15.0 * tol_here)
                    throw std::runtime_error("adaptive_simpson: tolerance not met at max depth");
                return left + right + delta / 15.0;
            }
            return run(a, m, fa, flm, fm, left, 0.5 * tol_here, depth - 1) +
                   run(m, b, fm, frm, fb, right, 0.5 * tol_here, depth - 1);
        }
    };
    const cplx fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    Rec rec{f};
    return rec.run(a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

namespace {

// Golub-Welsch from the symmetric tridiagonal Jacobi matrix.
void golub_welsch(const std::vector<double>& diag, const std::vector<double>& off,
                  double mu0, std::vector<double>& nodes, std::vector<double>& weights) {
    const int n = static_cast<int>(diag.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) J(i, i) = diag[i];
    for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = off[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        weights[i] = mu0 * v0 * v0;
    }
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    std::vector<double> diag(n, 0.0), off(n > 0 ? n - 1 : 0);
    for (int i = 1; i < n; ++i) off[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
    golub_welsch(diag, off, 2.0, nodes, weights);
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    std::vector<double> diag(n, 0.0), off(n > 0 ? n - 1 : 0);
    for (int i = 1; i < n; ++i) off[i - 1] = std::sqrt(0.5 * i);
    golub_welsch(diag, off, std::sqrt(M_PI), nodes, weights);
}

std::vector<double> poisson_weights(double lambda, int cut) {
    std::vector<double> p(cut + 1, 0.0);
    if (lambda <= 0.0) {
        p[0] = 1.0;
        return p;
    }
    const double loglam = std::log(lambda);
    for (int k = 0; k <= cut; ++k)
        p[k] = std::exp(-lambda + k * loglam - log_factorial(k));
    return p;
}

}  // namespace num
}  // namespace ndc
