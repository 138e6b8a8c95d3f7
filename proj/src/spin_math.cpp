#include "ndc/spin_math.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace ndc {
namespace spin {

namespace {

// Half-step build-up: given d^{l-1/2} (ascending index, dim 2l), produce d^l.
// Clebsch-Gordan split  |l,m> = a_m |l-1/2, m-1/2>|up> + b_m |l-1/2, m+1/2>|down>
// with a_m = sqrt((l+m)/(2l)), b_m = sqrt((l-m)/(2l)), and the spin-1/2 block
// [[c, s], [-s, c]] in ascending order (c = cos(beta/2), s = sin(beta/2)).
Eigen::MatrixXd half_step(const Eigen::MatrixXd& prev, int twice_l, double c, double s) {
    const int dim = twice_l + 1;       // new dimension
    const double tl = twice_l;         // 2l
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    // position p <-> 2m = -2l + 2p; a^2 = (l+m)/(2l) = p/(2l), b^2 = (2l-p)/(2l)
    for (int pr = 0; pr < dim; ++pr) {
        const double ar = std::sqrt(pr / tl);
        const double br = std::sqrt((twice_l - pr) / tl);
        for (int pc = 0; pc < dim; ++pc) {
            const double ac = std::sqrt(pc / tl);
            const double bc = std::sqrt((twice_l - pc) / tl);
            double acc = 0.0;
            // up/up: prev(pr-1, pc-1) * d_{++} ; d_{++} = c (ascending: (1,1) entry)
            if (pr >= 1 && pc >= 1) acc += ar * ac * c * prev(pr - 1, pc - 1);
            // up/down: prev(pr-1, pc) * d_{+-} = -s
            if (pr >= 1 && pc <= dim - 2) acc += ar * bc * (-s) * prev(pr - 1, pc);
            // down/up: prev(pr, pc-1) * d_{-+} = +s
            if (pr <= dim - 2 && pc >= 1) acc += br * ac * s * prev(pr, pc - 1);
            // down/down: prev(pr, pc) * d_{--} = c
            if (pr <= dim - 2 && pc <= dim - 2) acc += br * bc * c * prev(pr, pc);
            out(pr, pc) = acc;
        }
    }
    return out;
}

Eigen::MatrixXd build_d_matrix(int twice_j, double beta) {
    const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
    Eigen::MatrixXd d(1, 1);
    d(0, 0) = 1.0;
    for (int tl = 1; tl <= twice_j; ++tl) d = half_step(d, tl, c, s);
    return d;
}

std::mutex g_cache_mutex;
std::map<std::pair<int, double>, std::shared_ptr<const Eigen::MatrixXd>> g_cache;

}  // namespace

std::shared_ptr<const Eigen::MatrixXd> wigner_d_matrix(SpinJ j, double beta) {
    if (!std::isfinite(beta)) throw std::domain_error("wigner_d_matrix: non-finite angle");
    const auto key = std::make_pair(j.twice_j(), beta);
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = g_cache.find(key);
        if (it != g_cache.end()) return it->second;
    }
    auto mat = std::make_shared<const Eigen::MatrixXd>(build_d_matrix(j.twice_j(), beta));
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    if (g_cache.size() > 4096) g_cache.clear();
    g_cache[key] = mat;
    return mat;
}

double wigner_d(SpinJ j, MIndex m1, MIndex m2, double beta) {
    const auto d = wigner_d_matrix(j, beta);
    return (*d)(m1.position(j), m2.position(j));
}

Eigen::VectorXd wigner_d_column(SpinJ j, MIndex m2, double beta) {
    const auto d = wigner_d_matrix(j, beta);
    return d->col(m2.position(j));
}

SpinVector spin_coherent_state(SpinJ j, double phi) {
    const auto d = wigner_d_matrix(j, phi);
    Eigen::VectorXcd amp = d->col(0).cast<cplx>();
    return SpinVector(j, std::move(amp));
}

SpinVector rotate(const SpinVector& state, double phi) {
    const auto d = wigner_d_matrix(state.j, phi);
    return SpinVector(state.j, (*d) * state.amplitudes);
}

SpinVector parity_project(const SpinVector& state, Parity parity) {
    Eigen::VectorXcd amp = state.amplitudes;
    const bool want_even = parity == Parity::Even;
    for (int p = 0; p < state.j.dimension(); ++p) {
        if (MIndex::from_position(state.j, p).is_even() != want_even) amp(p) = 0.0;
    }
    return SpinVector(state.j, std::move(amp));
}

double husimi_q(const SpinVector& state, double phi, double theta) {
    if (std::abs(state.norm() - 1.0) > 1e-9)
        throw std::domain_error("husimi_q: state must be normalized");
    const auto d = wigner_d_matrix(state.j, phi);
    cplx ov = 0.0;
    for (int p = 0; p < state.j.dimension(); ++p) {
        const double mu = MIndex::from_position(state.j, p).eigenvalue();
        // probe amplitude e^{-i theta mu} d_{m,-j}(phi); overlap conjugates it
        ov += std::exp(cplx(0.0, theta * mu)) * (*d)(p, 0) * state.amplitudes(p);
    }
    return std::norm(ov);
}

}  // namespace spin
}  // namespace ndc
