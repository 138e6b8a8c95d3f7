#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>

#include "ndc/numerics.hpp"

namespace ndc {

/// Which of the four closed-form families a spin value belongs to.
/// Integer j splits by the parity of j; half-integer j = n + 1/2 splits by
/// the parity of n. "EvenLike" groups {even integer j, half-integer with odd n},
/// which share one column of the closed-form tables; "OddLike" is the rest.
enum class SpinBranch { EvenInteger, OddInteger, HalfIntegerEvenN, HalfIntegerOddN };

/// Exact spin quantum number, stored as 2j so half-integers stay integral.
class SpinJ {
public:
    explicit SpinJ(int twice_j) : twice_j_(twice_j) {
        if (twice_j < 1) throw std::domain_error("SpinJ: need 2j >= 1");
    }
    int twice_j() const { return twice_j_; }
    int dimension() const { return twice_j_ + 1; }
    bool is_half_integer() const { return twice_j_ % 2 != 0; }
    double j() const { return 0.5 * twice_j_; }

    SpinBranch branch() const {
        if (!is_half_integer())
            return (twice_j_ / 2) % 2 == 0 ? SpinBranch::EvenInteger : SpinBranch::OddInteger;
        return ((twice_j_ - 1) / 2) % 2 == 0 ? SpinBranch::HalfIntegerEvenN
                                             : SpinBranch::HalfIntegerOddN;
    }
    /// +1 for the even-integer-like column, -1 for the odd-integer-like one.
    int branch_sign() const {
        const SpinBranch b = branch();
        return (b == SpinBranch::EvenInteger || b == SpinBranch::HalfIntegerOddN) ? +1 : -1;
    }
    bool operator==(const SpinJ& o) const { return twice_j_ == o.twice_j_; }

private:
    int twice_j_;
};

/// Magnetic index, stored as 2m. For half-integer j the parity bookkeeping
/// runs over the integer label m_l = (2m - 1)/2 (eigenvalue m_l + 1/2).
class MIndex {
public:
    MIndex(SpinJ j, int twice_m) : twice_m_(twice_m) {
        if (std::abs(twice_m) > j.twice_j() || ((twice_m ^ j.twice_j()) & 1))
            throw std::domain_error("MIndex: invalid 2m for this spin");
        label_ = (j.twice_j() % 2 == 0) ? twice_m / 2 : (twice_m - 1) / 2;
    }
    int twice_m() const { return twice_m_; }
    double eigenvalue() const { return 0.5 * twice_m_; }
    /// Integer parity label (m for integer j, the appendix label for half-integer).
    int label() const { return label_; }
    bool is_even() const { return ((label_ % 2) + 2) % 2 == 0; }
    /// Position in ascending-m storage.
    static MIndex from_position(SpinJ j, int pos) { return MIndex(j, -j.twice_j() + 2 * pos); }
    int position(SpinJ j) const { return (twice_m_ + j.twice_j()) / 2; }

private:
    int twice_m_;
    int label_;
};

enum class Parity { Even, Odd };

/// State vector over the (2j+1)-dimensional Jz eigenbasis, ascending m.
struct SpinVector {
    SpinJ j;
    Eigen::VectorXcd amplitudes;

    SpinVector(SpinJ jj, Eigen::VectorXcd a) : j(jj), amplitudes(std::move(a)) {
        if (amplitudes.size() != j.dimension())
            throw std::domain_error("SpinVector: dimension mismatch");
    }
    double norm() const { return amplitudes.norm(); }
};

namespace spin {

/// Full Wigner little-d matrix d^j_{m',m}(beta) = <j m'| e^{-i beta Jy} |j m>,
/// rows/columns in ascending m order. Built by the half-step product
/// recurrence (spin-j assembled from 2j spin-1/2 factors), which stays
/// stable far beyond the factorial-overflow limit of the explicit sum.
/// Results are memoized per (2j, beta); the cache is thread-safe.
std::shared_ptr<const Eigen::MatrixXd> wigner_d_matrix(SpinJ j, double beta);

/// Single element d^j_{m1,m2}(beta).
double wigner_d(SpinJ j, MIndex m1, MIndex m2, double beta);

/// Column d^j_{.,m2}(beta) over ascending m.
Eigen::VectorXd wigner_d_column(SpinJ j, MIndex m2, double beta);

/// |phi> = e^{-i phi Jy} |j,-j>; amplitudes are d^j_{m,-j}(phi).
/// (The main-text rotation is written with the opposite sign of the
/// exponent; every observable here is insensitive to that global choice.)
SpinVector spin_coherent_state(SpinJ j, double phi);

SpinVector rotate(const SpinVector& state, double phi);

/// Zero the amplitudes whose parity label differs; result is unnormalized.
SpinVector parity_project(const SpinVector& state, Parity parity);

/// Husimi Q(phi, theta) = |<phi,theta|psi>|^2 with probe
/// |theta,phi> = e^{-i theta Jz} e^{-i phi Jy} |j,-j>  (theta applied last).
double husimi_q(const SpinVector& state, double phi, double theta);

}  // namespace spin
}  // namespace ndc
