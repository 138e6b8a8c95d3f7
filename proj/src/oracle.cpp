#include "ndc/oracle.hpp"

#include <cmath>

namespace ndc {
namespace oracle {

namespace {

constexpr double kLeakageTol = 1e-8;

Eigen::VectorXd eigenvalues_mu(SpinJ j) {
    Eigen::VectorXd mu(j.dimension());
    for (int p = 0; p < j.dimension(); ++p) mu(p) = MIndex::from_position(j, p).eigenvalue();
    return mu;
}

// Oscillator eigenfunctions psi_0..psi_nmax at the given nodes, by the
// normalized three-term recurrence.
Eigen::MatrixXd oscillator_psi(int n_max, const Eigen::VectorXd& x) {
    Eigen::MatrixXd psi(n_max + 1, x.size());
    const double norm0 = std::pow(M_PI, -0.25);
    for (int i = 0; i < x.size(); ++i) {
        psi(0, i) = norm0 * std::exp(-0.5 * x(i) * x(i));
        if (n_max >= 1) psi(1, i) = std::sqrt(2.0) * x(i) * psi(0, i);
    }
    for (int n = 1; n < n_max; ++n)
        for (int i = 0; i < x.size(); ++i)
            psi(n + 1, i) = std::sqrt(2.0 / (n + 1)) * x(i) * psi(n, i) -
                            std::sqrt(double(n) / (n + 1)) * psi(n - 1, i);
    return psi;
}

void purify_and_measure(const Eigen::MatrixXcd& rho_spin, SpinJ j, const FockSpace& fock,
                        const Eigen::VectorXcd& cavity, const HomodynePOVM& povm,
                        double chi_t, double& out_plus, double& out_minus) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho_spin + rho_spin.adjoint()));
    out_plus = out_minus = 0.0;
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
        const double w = es.eigenvalues()(k);
        if (w < 1e-16) continue;
        JointState branch = make_joint(SpinVector(j, es.eigenvectors().col(k)), cavity, fock);
        branch = dispersive_evolve(branch, chi_t);
        const MeasureResult r = homodyne_probabilities(branch, povm);
        out_plus += w * r.p_plus;
        out_minus += w * r.p_minus;
    }
}

}  // namespace

Eigen::VectorXcd coherent_vector(cplx alpha, int n_max) {
    Eigen::VectorXcd v(n_max + 1);
    const double a2 = std::norm(alpha);
    if (a2 == 0.0) {
        v.setZero();
        v(0) = 1.0;
        return v;
    }
    // log-magnitude recursion keeps large-n amplitudes in range
    const double la = std::log(std::abs(alpha));
    const double ph = std::arg(alpha);
    for (int n = 0; n <= n_max; ++n) {
        const double logmag = -0.5 * a2 + n * la - 0.5 * num::log_factorial(n);
        v(n) = std::polar(std::exp(logmag), n * ph);
    }
    return v;
}

double coherent_leakage(const Eigen::VectorXcd& v) {
    return 1.0 - v.squaredNorm();
}

HomodynePOVM HomodynePOVM::build(int n_max) {
    // Composite 8-point Gauss-Legendre panels on [0, x_max]; the integrands
    // psi_n psi_n' oscillate on the scale 2 pi / sqrt(2 n_max), so 0.25-wide
    // panels resolve them to spectral accuracy.
    const double x_max = std::sqrt(2.0 * n_max + 1.0) + 10.0;
    const int n_panels = static_cast<int>(std::ceil(x_max / 0.25));
    std::vector<double> gl_x, gl_w;
    num::gauss_legendre(8, gl_x, gl_w);
    const int total = 8 * n_panels;
    Eigen::VectorXd x(total), w(total);
    for (int p = 0; p < n_panels; ++p) {
        const double a = x_max * p / n_panels, b = x_max * (p + 1) / n_panels;
        for (int q = 0; q < 8; ++q) {
            x(8 * p + q) = 0.5 * (b - a) * gl_x[q] + 0.5 * (a + b);
            w(8 * p + q) = 0.5 * (b - a) * gl_w[q];
        }
    }
    const Eigen::MatrixXd psi = oscillator_psi(n_max, x);
    HomodynePOVM povm;
    povm.plus = psi * w.asDiagonal() * psi.transpose();
    // psi_n(-x) = (-1)^n psi_n(x)  =>  Pi_- = S Pi_+ S
    povm.minus = povm.plus;
    for (int r = 0; r <= n_max; ++r)
        for (int c = 0; c <= n_max; ++c)
            if ((r + c) % 2 != 0) povm.minus(r, c) = -povm.minus(r, c);
    return povm;
}

JointState make_joint(const SpinVector& spin, const Eigen::VectorXcd& cavity, FockSpace fock) {
    if (cavity.size() != fock.dim()) throw std::domain_error("make_joint: cavity size mismatch");
    JointState s{spin.j, fock, spin.amplitudes * cavity.transpose()};
    return s;
}

JointState dispersive_evolve(const JointState& state, double chi_t) {
    JointState out = state;
    const Eigen::VectorXd mu = eigenvalues_mu(state.j);
    for (int p = 0; p < state.j.dimension(); ++p) {
        for (int n = 0; n < state.fock.dim(); ++n) {
            const double phase = -chi_t * (n * mu(p) - 2.0 * mu(p) * mu(p));
            out.c(p, n) *= std::exp(cplx(0.0, phase));
        }
    }
    return out;
}

MeasureResult homodyne_probabilities(const JointState& state, const HomodynePOVM& povm) {
    if (povm.plus.rows() != state.fock.dim())
        throw std::domain_error("homodyne_probabilities: POVM dimension mismatch");
    MeasureResult r;
    r.rho_plus = state.c * povm.plus * state.c.adjoint();
    r.rho_minus = state.c * povm.minus * state.c.adjoint();
    r.p_plus = r.rho_plus.trace().real();
    r.p_minus = r.rho_minus.trace().real();
    return r;
}

ProbabilityTable full_protocol_exact(SpinJ j, double phi1, double phi2,
                                     const CavityAmplitude& alpha, std::optional<int> n_max) {
    const FockSpace fock(n_max.value_or(FockSpace::required_cutoff(alpha.alpha0_mag)));
    fock.check_adequate(alpha.alpha0_mag);
    const Eigen::VectorXcd cavity = coherent_vector(alpha.protocol_value(), fock.n_max);
    if (coherent_leakage(cavity) > kLeakageTol)
        throw resource_error("full_protocol_exact: coherent-state truncation leakage " +
                             std::to_string(coherent_leakage(cavity)));
    const HomodynePOVM povm = HomodynePOVM::build(fock.n_max);

    ProbabilityTable t;
    // double-measurement branch
    const SpinVector psi1 = spin::spin_coherent_state(j, phi1);
    JointState joint = dispersive_evolve(make_joint(psi1, cavity, fock), M_PI);
    const MeasureResult first = homodyne_probabilities(joint, povm);
    const auto d2 = spin::wigner_d_matrix(j, phi2);
    for (int s1 = 0; s1 < 2; ++s1) {
        const Eigen::MatrixXcd& rho = (s1 == 0) ? first.rho_plus : first.rho_minus;
        const Eigen::MatrixXcd rot = (*d2).cast<cplx>() * rho * (*d2).transpose().cast<cplx>();
        purify_and_measure(rot, j, fock, cavity, povm, M_PI, t.p12[s1][0], t.p12[s1][1]);
    }
    // single-measurement branch: rotations compose
    const SpinVector psi12 = spin::spin_coherent_state(j, phi1 + phi2);
    const MeasureResult second =
        homodyne_probabilities(dispersive_evolve(make_joint(psi12, cavity, fock), M_PI), povm);
    t.p2_plus = second.p_plus;
    t.p2_minus = second.p_minus;
    return t;
}

namespace {

// Lindblad right-hand side in chi = 1 units, acting blockwise on the
// (spin m, spin n) partition of the joint density matrix.
void lindblad_rhs(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out, SpinJ j, int fdim,
                  double rc, double rs) {
    const int ds = j.dimension();
    const Eigen::VectorXd mu = eigenvalues_mu(j);
    out.setZero();
    for (int ms = 0; ms < ds; ++ms) {
        for (int ns = 0; ns < ds; ++ns) {
            const auto B = rho.block(ms * fdim, ns * fdim, fdim, fdim);
            auto O = out.block(ms * fdim, ns * fdim, fdim, fdim);
            const double dmu = mu(ms) - mu(ns);
            for (int f = 0; f < fdim; ++f) {
                for (int fp = 0; fp < fdim; ++fp) {
                    // i [rho, H], H = n mu - 2 mu^2 diagonal
                    const double hket = f * mu(ms) - 2.0 * mu(ms) * mu(ms);
                    const double hbra = fp * mu(ns) - 2.0 * mu(ns) * mu(ns);
                    cplx val = cplx(0.0, hbra - hket) * B(f, fp);
                    // cavity decay rc (a rho a^dag - {rho, n}/2)
                    if (f + 1 < fdim && fp + 1 < fdim)
                        val += rc * std::sqrt(double(f + 1) * double(fp + 1)) * B(f + 1, fp + 1);
                    val -= rc * 0.5 * (f + fp) * B(f, fp);
                    // dephasing, normalized so coherences damp as e^{-(m-n)^2 rs t}
                    val -= rs * dmu * dmu * B(f, fp);
                    O(f, fp) = val;
                }
            }
        }
    }
}

}  // namespace

JointDensity lindblad_rk4(SpinJ j, double phi, const CavityAmplitude& alpha,
                          const DecoherenceRates& rates, double chi_t_final, int steps,
                          std::optional<int> n_max) {
    const FockSpace fock(n_max.value_or(FockSpace::required_cutoff(alpha.alpha0_mag)));
    fock.check_adequate(alpha.alpha0_mag);
    const int fdim = fock.dim();
    const int dim = j.dimension() * fdim;
    const Eigen::VectorXcd cavity = coherent_vector(alpha.protocol_value(), fock.n_max);
    const SpinVector psi = spin::spin_coherent_state(j, phi);
    Eigen::VectorXcd joint(dim);
    for (int p = 0; p < j.dimension(); ++p)
        joint.segment(p * fdim, fdim) = psi.amplitudes(p) * cavity;
    Eigen::MatrixXcd rho = joint * joint.adjoint();

    Eigen::MatrixXcd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);
    const double h = chi_t_final / steps;
    for (int s = 0; s < steps; ++s) {
        lindblad_rhs(rho, k1, j, fdim, rates.r_c, rates.r_s);
        tmp = rho + 0.5 * h * k1;
        lindblad_rhs(tmp, k2, j, fdim, rates.r_c, rates.r_s);
        tmp = rho + 0.5 * h * k2;
        lindblad_rhs(tmp, k3, j, fdim, rates.r_c, rates.r_s);
        tmp = rho + h * k3;
        lindblad_rhs(tmp, k4, j, fdim, rates.r_c, rates.r_s);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return {j, fock, std::move(rho)};
}

JointDensity lindblad_rk4_auto(SpinJ j, double phi, const CavityAmplitude& alpha,
                               const DecoherenceRates& rates, double chi_t_final, double tol,
                               std::optional<int> n_max) {
    int steps = 256;
    JointDensity prev = lindblad_rk4(j, phi, alpha, rates, chi_t_final, steps, n_max);
    for (int iter = 0; iter < 8; ++iter) {
        steps *= 2;
        JointDensity next = lindblad_rk4(j, phi, alpha, rates, chi_t_final, steps, n_max);
        if (trace_distance(prev.rho, next.rho) < tol) return next;
        prev = std::move(next);
    }
    throw std::runtime_error("lindblad_rk4_auto: step halving did not converge");
}

Eigen::MatrixXcd analytic_joint_density(const BranchedJointState& state, int n_max) {
    const int ds = state.j.dimension();
    const int fdim = n_max + 1;
    std::vector<Eigen::VectorXcd> branch(ds);
    for (int p = 0; p < ds; ++p) branch[p] = coherent_vector(state.alpha(p), n_max);
    Eigen::MatrixXcd rho(ds * fdim, ds * fdim);
    for (int pm = 0; pm < ds; ++pm)
        for (int pn = 0; pn < ds; ++pn)
            rho.block(pm * fdim, pn * fdim, fdim, fdim) =
                state.rho(pm, pn) * branch[pm] * branch[pn].adjoint();
    return rho;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd d = a - b;
    d = 0.5 * (d + d.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// 2^N qubit-level protocol
// ---------------------------------------------------------------------------
namespace {

struct QubitWindow {
    // Per magnetization sector: member states plus, when the XY term is on,
    // the precomputed propagators exp(-i (n D + X)) for every photon number.
    struct Sector {
        std::vector<int> states;
        Eigen::VectorXd diag;                // t_I * sum_i (2 g_i^2/Delta) s_i per state
        std::vector<Eigen::MatrixXcd> prop;  // one per Fock level when XY is on
    };
    std::vector<Sector> sectors;
    bool with_xy = false;

    static QubitWindow build(const std::vector<double>& g, double gbar, bool include_xy,
                             int fdim) {
        const int N = static_cast<int>(g.size());
        QubitWindow w;
        w.with_xy = include_xy;
        w.sectors.resize(N + 1);
        std::vector<int> pos_in_sector(1 << N);
        for (int s = 0; s < (1 << N); ++s) {
            const int k = __builtin_popcount(unsigned(s));
            pos_in_sector[s] = static_cast<int>(w.sectors[k].states.size());
            w.sectors[k].states.push_back(s);
        }
        for (int k = 0; k <= N; ++k) {
            auto& sec = w.sectors[k];
            const int m = static_cast<int>(sec.states.size());
            sec.diag.resize(m);
            for (int i = 0; i < m; ++i) {
                double acc = 0.0;
                for (int q = 0; q < N; ++q) {
                    const double s = ((sec.states[i] >> q) & 1) ? 1.0 : -1.0;
                    acc += M_PI * g[q] * g[q] / (2.0 * gbar * gbar) * s;
                }
                sec.diag(i) = acc;
            }
            if (!include_xy || m == 1) continue;
            Eigen::MatrixXd hop = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                const int st = sec.states[i];
                for (int a = 0; a < N; ++a) {
                    if (!((st >> a) & 1)) continue;
                    for (int b = 0; b < N; ++b) {
                        if ((st >> b) & 1) continue;
                        const int st2 = (st ^ (1 << a)) | (1 << b);
                        hop(pos_in_sector[st2], i) += 2.0 * M_PI * g[a] * g[b] / (gbar * gbar);
                    }
                }
            }
            sec.prop.reserve(fdim);
            for (int n = 0; n < fdim; ++n) {
                Eigen::MatrixXd M = hop;
                M.diagonal() += double(n) * sec.diag;
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
                const Eigen::VectorXcd phases =
                    (cplx(0.0, -1.0) * es.eigenvalues().cast<cplx>()).array().exp();
                sec.prop.push_back(es.eigenvectors().cast<cplx>() * phases.asDiagonal() *
                                   es.eigenvectors().transpose().cast<cplx>());
            }
        }
        return w;
    }

    // Apply the window to every Fock column of c (2^N x fdim).
    void apply(Eigen::MatrixXcd& c) const {
        const int fdim = static_cast<int>(c.cols());
        for (const auto& sec : sectors) {
            const int m = static_cast<int>(sec.states.size());
            if (sec.prop.empty()) {
                for (int i = 0; i < m; ++i)
                    for (int n = 0; n < fdim; ++n)
                        c(sec.states[i], n) *= std::exp(cplx(0.0, -n * sec.diag(i)));
                continue;
            }
            Eigen::MatrixXcd rows(m, fdim);
            for (int i = 0; i < m; ++i) rows.row(i) = c.row(sec.states[i]);
            for (int n = 0; n < fdim; ++n) rows.col(n) = sec.prop[n] * rows.col(n);
            for (int i = 0; i < m; ++i) c.row(sec.states[i]) = rows.row(i);
        }
    }
};

Eigen::MatrixXcd product_rotation(const std::vector<double>& phis) {
    const int N = static_cast<int>(phis.size());
    const int dim = 1 << N;
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = N - 1; q >= 0; --q) {
        const double c = std::cos(0.5 * phis[q]), s = std::sin(0.5 * phis[q]);
        Eigen::MatrixXcd u(2, 2);
        // ascending (down, up) basis of the spin-1/2 little-d matrix
        u << c, s, -s, c;
        Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(2 * U.rows(), 2 * U.cols());
        next.block(0, 0, U.rows(), U.cols()) = u(0, 0) * U;
        next.block(0, U.cols(), U.rows(), U.cols()) = u(0, 1) * U;
        next.block(U.rows(), 0, U.rows(), U.cols()) = u(1, 0) * U;
        next.block(U.rows(), U.cols(), U.rows(), U.cols()) = u(1, 1) * U;
        U = std::move(next);
    }
    if (U.rows() != dim) throw std::logic_error("product_rotation: dimension bug");
    return U;
}

}  // namespace

ProbabilityTable qubit_level_protocol(const CouplingSample& couplings, bool include_xy,
                                      const CavityAmplitude& alpha, std::optional<int> n_max,
                                      double phi_bar) {
    const int N = static_cast<int>(couplings.g.size());
    if (N < 1 || N > 8)
        throw resource_error("qubit_level_protocol: N must be in [1, 8], got " +
                             std::to_string(N));
    const FockSpace fock(n_max.value_or(FockSpace::required_cutoff(alpha.alpha0_mag)));
    fock.check_adequate(alpha.alpha0_mag);
    const int fdim = fock.dim();
    const int dim = 1 << N;
    double gbar = 0.0;
    for (double g : couplings.g) gbar += g;
    gbar /= N;

    std::vector<double> phis(N);
    for (int q = 0; q < N; ++q) phis[q] = phi_bar * couplings.g[q] / gbar;
    const Eigen::MatrixXcd U1 = product_rotation(phis);
    const QubitWindow window = QubitWindow::build(couplings.g, gbar, include_xy, fdim);
    const Eigen::VectorXcd cavity = coherent_vector(alpha.protocol_value(), fock.n_max);
    const HomodynePOVM povm = HomodynePOVM::build(fock.n_max);

    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
    psi0(0) = 1.0;  // all qubits down
    const Eigen::VectorXcd psi1 = U1 * psi0;

    auto measure = [&](const Eigen::MatrixXcd& c) {
        MeasureResult r;
        r.rho_plus = c * povm.plus * c.adjoint();
        r.rho_minus = c * povm.minus * c.adjoint();
        r.p_plus = r.rho_plus.trace().real();
        r.p_minus = r.rho_minus.trace().real();
        return r;
    };

    Eigen::MatrixXcd c = psi1 * cavity.transpose();
    window.apply(c);
    const MeasureResult first = measure(c);

    ProbabilityTable t;
    for (int s1 = 0; s1 < 2; ++s1) {
        const Eigen::MatrixXcd& rho = (s1 == 0) ? first.rho_plus : first.rho_minus;
        const Eigen::MatrixXcd rot = U1 * rho * U1.adjoint();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rot + rot.adjoint()));
        double pp = 0.0, pm = 0.0;
        for (int k = 0; k < dim; ++k) {
            const double w = es.eigenvalues()(k);
            if (w < 1e-16) continue;
            Eigen::MatrixXcd cb = es.eigenvectors().col(k) * cavity.transpose();
            window.apply(cb);
            const MeasureResult r = measure(cb);
            pp += w * r.p_plus;
            pm += w * r.p_minus;
        }
        t.p12[s1][0] = pp;
        t.p12[s1][1] = pm;
    }
    const Eigen::VectorXcd psi2 = U1 * psi1;
    Eigen::MatrixXcd c2 = psi2 * cavity.transpose();
    window.apply(c2);
    const MeasureResult second = measure(c2);
    t.p2_plus = second.p_plus;
    t.p2_minus = second.p_minus;
    return t;
}

double resonant_rotation_check(SpinJ j, double g, double alpha_r, double t,
                               std::optional<int> n_max) {
    if (alpha_r <= 0.0 || g <= 0.0) throw std::domain_error("resonant_rotation_check: bad inputs");
    const FockSpace fock(n_max.value_or(FockSpace::required_cutoff(alpha_r)));
    fock.check_adequate(alpha_r);
    const int ds = j.dimension(), fdim = fock.dim();
    const Eigen::VectorXd mu = eigenvalues_mu(j);
    Eigen::VectorXd jp(ds - 1);  // <p+1| J+ |p>
    for (int p = 0; p + 1 < ds; ++p)
        jp(p) = std::sqrt((j.j() - mu(p)) * (j.j() + mu(p) + 1.0));

    // drive phased at -i so the classical limit is exp(-i phi Jy)
    const Eigen::VectorXcd cavity = coherent_vector(cplx(0.0, -alpha_r), fock.n_max);
    Eigen::MatrixXcd c0 = Eigen::MatrixXcd::Zero(ds, fdim);
    c0.row(0) = cavity.transpose();

    // H = g (a J+ + a^dag J-)
    auto apply_h = [&](const Eigen::MatrixXcd& v, Eigen::MatrixXcd& out) {
        out.setZero();
        for (int p = 0; p + 1 < ds; ++p) {
            for (int n = 0; n + 1 < fdim; ++n) {
                const double amp = g * jp(p) * std::sqrt(double(n + 1));
                out(p + 1, n) += amp * v(p, n + 1);  // a J+
                out(p, n + 1) += amp * v(p + 1, n);  // a^dag J-
            }
        }
    };

    auto evolve = [&](int steps) {
        Eigen::MatrixXcd c = c0, k1(ds, fdim), k2(ds, fdim), k3(ds, fdim), k4(ds, fdim),
                        tmp(ds, fdim);
        const double h = t / steps;
        const cplx mih(0.0, -1.0);
        for (int s = 0; s < steps; ++s) {
            apply_h(c, k1);
            tmp = c + 0.5 * h * mih * k1;
            apply_h(tmp, k2);
            tmp = c + 0.5 * h * mih * k2;
            apply_h(tmp, k3);
            tmp = c + h * mih * k3;
            apply_h(tmp, k4);
            c += (h / 6.0) * mih * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return c;
    };

    const SpinVector target = spin::spin_coherent_state(j, 2.0 * g * alpha_r * t);
    const double hscale = 2.0 * g * std::sqrt(double(fdim)) * (j.j() + 1.0);
    int steps = std::max(200, static_cast<int>(std::ceil(40.0 * t * hscale)));
    double fid_prev = -1.0;
    for (int iter = 0; iter < 6; ++iter) {
        const Eigen::MatrixXcd c = evolve(steps);
        const Eigen::MatrixXcd rho = c * c.adjoint();
        const double fid =
            (target.amplitudes.adjoint() * rho * target.amplitudes)(0, 0).real() /
            rho.trace().real();
        if (fid_prev >= 0.0 && std::abs(fid - fid_prev) < 1e-9) return fid;
        fid_prev = fid;
        steps *= 2;
    }
    return fid_prev;
}

DisturbanceReport disturbance_method_check(SpinJ j, double phi, const CavityAmplitude& alpha,
                                           int method, std::optional<int> n_max) {
    if (method != 1 && method != 2)
        throw std::domain_error("disturbance_method_check: method must be 1 or 2");
    const FockSpace fock(n_max.value_or(FockSpace::required_cutoff(alpha.alpha0_mag)));
    fock.check_adequate(alpha.alpha0_mag);
    const Eigen::VectorXcd cavity = coherent_vector(alpha.protocol_value(), fock.n_max);
    const HomodynePOVM povm = HomodynePOVM::build(fock.n_max);
    const auto d = spin::wigner_d_matrix(j, phi);
    const SpinVector psi1 = spin::spin_coherent_state(j, phi);

    DisturbanceReport rep;
    // --- single-measurement branch ---
    Eigen::MatrixXcd rho_single;  // spin state entering the second rotation
    if (method == 1) {
        // two entangling windows, no readout in between
        JointState s = dispersive_evolve(make_joint(psi1, cavity, fock), M_PI);
        s = dispersive_evolve(s, M_PI);
        rho_single = s.c * s.c.adjoint();
    } else {
        // even cat input; the window then acts trivially on the joint state
        Eigen::VectorXcd cat =
            coherent_vector(alpha.protocol_value(), fock.n_max) +
            coherent_vector(-alpha.protocol_value(), fock.n_max);
        cat /= std::sqrt(2.0 + 2.0 * std::exp(-2.0 * alpha.alpha0_mag * alpha.alpha0_mag));
        JointState s = dispersive_evolve(make_joint(psi1, cat, fock), M_PI);
        // homodyne performed and its outcome discarded = partial trace
        rho_single = s.c * s.c.adjoint();
    }
    {
        const Eigen::MatrixXcd pre = psi1.amplitudes * psi1.amplitudes.adjoint();
        rep.first_window_disturbance =
            trace_distance(rho_single / rho_single.trace().real(), pre);
    }
    {
        const Eigen::MatrixXcd rot =
            (*d).cast<cplx>() * rho_single * (*d).transpose().cast<cplx>();
        purify_and_measure(rot, j, fock, cavity, povm, M_PI, rep.table.p2_plus,
                           rep.table.p2_minus);
    }

    // --- double-measurement branch ---
    JointState joint = dispersive_evolve(make_joint(psi1, cavity, fock), M_PI);
    for (int s1 = 0; s1 < 2; ++s1) {
        Eigen::MatrixXcd rho_spin;
        if (method == 1) {
            // project the cavity, run the extra window on the same cavity mode,
            // then discard it
            JointState proj = joint;
            proj.c = joint.c * ((s1 == 0) ? povm.plus : povm.minus).cast<cplx>();
            proj = dispersive_evolve(proj, M_PI);
            rho_spin = proj.c * proj.c.adjoint();
        } else {
            const MeasureResult first = homodyne_probabilities(joint, povm);
            rho_spin = (s1 == 0) ? first.rho_plus : first.rho_minus;
        }
        const Eigen::MatrixXcd rot = (*d).cast<cplx>() * rho_spin * (*d).transpose().cast<cplx>();
        purify_and_measure(rot, j, fock, cavity, povm, M_PI, rep.table.p12[s1][0],
                           rep.table.p12[s1][1]);
    }
    return rep;
}

}  // namespace oracle
}  // namespace ndc
