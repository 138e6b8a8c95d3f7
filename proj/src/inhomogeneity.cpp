#include "ndc/inhomogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>

namespace ndc {
namespace inhomogeneity {

namespace {

// Joint index iteration over n groups of local dimension ds.
struct JointIndex {
    std::vector<int> digits;
    bool advance(int ds) {
        for (std::size_t k = 0; k < digits.size(); ++k) {
            if (++digits[k] < ds) return true;
            digits[k] = 0;
        }
        return false;
    }
};

double checked_dim(const GroupedCouplings& g, std::size_t entry_cap, bool squared) {
    const double dim = std::pow(double(g.j_sub.dimension()), g.n_groups);
    const double need = squared ? dim * dim * 3.0 : dim * 6.0;
    if (need > double(entry_cap))
        throw resource_error("inhomogeneity: joint dimension " + std::to_string(std::size_t(dim)) +
                             " needs " + std::to_string(std::size_t(need)) +
                             " complex entries, cap is " + std::to_string(entry_cap));
    return dim;
}

}  // namespace

CouplingSample sample_couplings(int N, double mean, double sigma, std::uint64_t seed) {
    if (N < 1) throw std::domain_error("sample_couplings: N >= 1 required");
    if (sigma < 0.0) throw std::domain_error("sample_couplings: sigma < 0");
    CouplingSample s;
    s.seed = seed;
    s.mean_g = mean;
    s.sigma_g = sigma;
    s.g.resize(N);
    std::mt19937_64 eng(seed);
    auto uniform = [&eng]() {
        // 53-bit mantissa in (0, 1]; avoids the unspecified std distribution
        return (double((eng() >> 11) + 1)) * 0x1.0p-53;
    };
    int have = 0;
    while (have < N) {
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        s.g[have++] = mean + sigma * r * std::cos(2.0 * M_PI * u2);
        if (have < N) s.g[have++] = mean + sigma * r * std::sin(2.0 * M_PI * u2);
    }
    return s;
}

GroupedCouplings group_couplings(const CouplingSample& sample, int n) {
    const int N = static_cast<int>(sample.g.size());
    if (n < 1 || N % n != 0)
        throw std::domain_error("group_couplings: N must be divisible by n");
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (sample.g[a] != sample.g[b]) return sample.g[a] > sample.g[b];
        return a < b;
    });
    const int block = N / n;
    GroupedCouplings out{n, SpinJ(block), {}, 0.0};
    out.group_means.resize(n);
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < block; ++i) acc += sample.g[order[k * block + i]];
        out.group_means[k] = acc / block;
    }
    out.sample_mean = std::accumulate(sample.g.begin(), sample.g.end(), 0.0) / N;
    return out;
}

EffectiveAngles effective_angles(const GroupedCouplings& groups, double phi_bar) {
    EffectiveAngles a;
    for (double gk : groups.group_means) {
        const double r = gk / groups.sample_mean;
        a.phi.push_back(phi_bar * r);
        a.theta.push_back(M_PI * r * r);
    }
    return a;
}

ProbabilityTable inhomogeneous_probabilities(const GroupedCouplings& groups,
                                             const CavityAmplitude& alpha,
                                             std::size_t entry_cap) {
    const int n = groups.n_groups;
    const SpinJ js = groups.j_sub;
    const int ds = js.dimension();
    const std::size_t dim = static_cast<std::size_t>(checked_dim(groups, entry_cap, true));
    const EffectiveAngles ang = effective_angles(groups);
    const cplx a0 = alpha.protocol_value();

    std::vector<Eigen::VectorXd> cols, cols2;
    std::vector<Eigen::MatrixXd> rots;
    for (int k = 0; k < n; ++k) {
        cols.push_back(spin::wigner_d_matrix(js, ang.phi[k])->col(0));
        cols2.push_back(spin::wigner_d_matrix(js, 2.0 * ang.phi[k])->col(0));
        rots.push_back(*spin::wigner_d_matrix(js, ang.phi[k]));
    }

    // Joint amplitude vector, branch phases, composed-rotation amplitudes.
    Eigen::VectorXd A(dim), A2(dim);
    Eigen::VectorXd theta_dot(dim);
    {
        JointIndex it{std::vector<int>(n, 0)};
        std::size_t lin = 0;
        do {
            double a = 1.0, a2 = 1.0, th = 0.0;
            for (int k = 0; k < n; ++k) {
                const int p = it.digits[k];
                a *= cols[k](p);
                a2 *= cols2[k](p);
                th += ang.theta[k] * MIndex::from_position(js, p).eigenvalue();
            }
            A(lin) = a;
            A2(lin) = a2;
            theta_dot(lin) = th;
            ++lin;
        } while (it.advance(ds));
    }

    Eigen::VectorXcd betas(dim);
    Eigen::VectorXd wplus(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        betas(i) = a0 * std::exp(cplx(0.0, -theta_dot(i)));
        wplus(i) = 0.5 * (1.0 + std::erf(M_SQRT2 * betas(i).real()));
    }

    // First-window overlap matrices (closed erf/exp forms).
    Eigen::MatrixXcd Ip(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            Ip(r, c) = coherent::halfline_plus(betas(r), betas(c));

    // rho_s1 = (A A^T) o I_s1, rotated by the joint second rotation; the second
    // measurement is diagonal, so only diag(R rho R^T) is needed.
    auto apply_joint_rotation = [&](Eigen::MatrixXcd m) {
        // contract each tensor factor in turn on both sides
        std::size_t stride = 1;
        for (int k = 0; k < n; ++k) {
            const Eigen::MatrixXcd rk = rots[k].cast<cplx>();
            Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(dim, dim);
            // rows: group k digit at position (lin / stride) % ds
            for (std::size_t col = 0; col < dim; ++col) {
                for (std::size_t row = 0; row < dim; ++row) {
                    const int digit = int((row / stride) % std::size_t(ds));
                    const std::size_t base = row - digit * stride;
                    cplx acc = 0.0;
                    for (int q = 0; q < ds; ++q) acc += rk(digit, q) * m(base + q * stride, col);
                    next(row, col) = acc;
                }
            }
            m = std::move(next);
            stride *= ds;
        }
        // right side: m R^T
        stride = 1;
        for (int k = 0; k < n; ++k) {
            const Eigen::MatrixXcd rk = rots[k].cast<cplx>();
            Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(dim, dim);
            for (std::size_t row = 0; row < dim; ++row) {
                for (std::size_t col = 0; col < dim; ++col) {
                    const int digit = int((col / stride) % std::size_t(ds));
                    const std::size_t base = col - digit * stride;
                    cplx acc = 0.0;
                    for (int q = 0; q < ds; ++q) acc += rk(digit, q) * m(row, base + q * stride);
                    next(row, col) = acc;
                }
            }
            m = std::move(next);
            stride *= ds;
        }
        return m;
    };

    ProbabilityTable t;
    for (int s1 = 0; s1 < 2; ++s1) {
        Eigen::MatrixXcd rho(dim, dim);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) {
                const cplx ov = (s1 == 0) ? Ip(r, c)
                                          : coherent::overlap(betas(r), betas(c)) - Ip(r, c);
                rho(r, c) = A(r) * A(c) * ov;
            }
        rho = apply_joint_rotation(std::move(rho));
        cplx pp = 0.0, pm = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            pp += rho(i, i) * wplus(i);
            pm += rho(i, i) * (1.0 - wplus(i));
        }
        t.p12[s1][0] = pp.real();
        t.p12[s1][1] = pm.real();
    }
    double p2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) p2 += A2(i) * A2(i) * wplus(i);
    t.p2_plus = p2;
    t.p2_minus = 1.0 - p2;
    return t;
}

ViolationResult inhomogeneous_violation(const GroupedCouplings& groups,
                                        const CavityAmplitude& alpha,
                                        std::size_t entry_cap) {
    const int n = groups.n_groups;
    const SpinJ js = groups.j_sub;
    const int ds = js.dimension();
    const std::size_t dim = static_cast<std::size_t>(checked_dim(groups, entry_cap, false));
    const EffectiveAngles ang = effective_angles(groups);
    const double amag = alpha.alpha0_mag;
    const cplx a0 = alpha.protocol_value();

    std::vector<Eigen::VectorXd> cols, cols2;
    std::vector<Eigen::MatrixXd> rots;
    std::vector<Eigen::VectorXd> mus;
    for (int k = 0; k < n; ++k) {
        cols.push_back(spin::wigner_d_matrix(js, ang.phi[k])->col(0));
        cols2.push_back(spin::wigner_d_matrix(js, 2.0 * ang.phi[k])->col(0));
        rots.push_back(*spin::wigner_d_matrix(js, ang.phi[k]));
        Eigen::VectorXd mu(ds);
        for (int p = 0; p < ds; ++p) mu(p) = MIndex::from_position(js, p).eigenvalue();
        mus.push_back(mu);
    }

    auto wplus_of = [&](double th) {
        const cplx beta = a0 * std::exp(cplx(0.0, -th));
        return 0.5 * (1.0 + std::erf(M_SQRT2 * beta.real()));
    };

    // P2(+): the two rotations compose; second measurement is diagonal.
    double p2 = 0.0;
    {
        JointIndex it{std::vector<int>(n, 0)};
        do {
            double a2 = 1.0, th = 0.0;
            for (int k = 0; k < n; ++k) {
                a2 *= cols2[k](it.digits[k]);
                th += ang.theta[k] * mus[k](it.digits[k]);
            }
            p2 += a2 * a2 * wplus_of(th);
        } while (it.advance(ds));
    }

    // S+ = P12(++) + P12(-+). The summed first-window kernel is the plain
    // coherent overlap  <b_n'|b_n> = exp(-|a0|^2 (1 - e^{-i(th - th')}))
    // = e^{-|a0|^2} sum_p |a0|^{2p}/p! e^{-ip th} e^{+ip th'},
    // which factorizes over groups term by term.
    const double lam = amag * amag;
    const int pcut = static_cast<int>(std::ceil(lam + 10.0 * amag)) + 8;
    const std::vector<double> cp = num::poisson_weights(lam, pcut);

    double s_plus = 0.0;
    for (int p = 0; p <= pcut; ++p) {
        if (cp[p] < 1e-22) continue;
        // t_k = R_k (col_k o e^{-i p theta_k mu}): second-rotation image of the
        // p-th kernel component
        std::vector<Eigen::VectorXcd> tk(n);
        for (int k = 0; k < n; ++k) {
            Eigen::VectorXcd v(ds);
            for (int q = 0; q < ds; ++q)
                v(q) = cols[k](q) * std::exp(cplx(0.0, -p * ang.theta[k] * mus[k](q)));
            tk[k] = rots[k].cast<cplx>() * v;
        }
        double acc = 0.0;
        JointIndex it{std::vector<int>(n, 0)};
        do {
            cplx prod = 1.0;
            double th = 0.0;
            for (int k = 0; k < n; ++k) {
                prod *= tk[k](it.digits[k]);
                th += ang.theta[k] * mus[k](it.digits[k]);
            }
            acc += std::norm(prod) * wplus_of(th);
        } while (it.advance(ds));
        s_plus += cp[p] * acc;
    }

    const double v = p2 - s_plus;
    return {v, -v};
}

SeedAverage seed_averaged_violation(int N, double mean, double sigma, int n_groups,
                                    const CavityAmplitude& alpha, int n_seeds,
                                    std::uint64_t seed_base, std::size_t entry_cap) {
    if (n_seeds < 1) throw std::domain_error("seed_averaged_violation: n_seeds >= 1");
    std::vector<std::future<double>> futs;
    futs.reserve(n_seeds);
    for (int s = 0; s < n_seeds; ++s) {
        futs.push_back(std::async(std::launch::async, [=]() {
            const CouplingSample cs = sample_couplings(N, mean, sigma, seed_base + s);
            const GroupedCouplings gc = group_couplings(cs, n_groups);
            return std::abs(inhomogeneous_violation(gc, alpha, entry_cap).v_plus);
        }));
    }
    std::vector<double> vals;
    vals.reserve(n_seeds);
    for (auto& f : futs) vals.push_back(f.get());
    SeedAverage out;
    out.n_seeds = n_seeds;
    out.mean_abs_v = std::accumulate(vals.begin(), vals.end(), 0.0) / n_seeds;
    double var = 0.0;
    for (double v : vals) var += (v - out.mean_abs_v) * (v - out.mean_abs_v);
    out.std_error = n_seeds > 1 ? std::sqrt(var / (n_seeds - 1.0) / n_seeds) : 0.0;
    return out;
}

}  // namespace inhomogeneity
}  // namespace ndc
