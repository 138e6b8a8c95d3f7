#pragma once

#include <cstdint>
#include <optional>

#include "ndc/decoherence.hpp"

namespace ndc {

/// One draw of per-qubit couplings g_i ~ N(mean, sigma^2); angular-frequency units.
struct CouplingSample {
    std::vector<double> g;
    std::uint64_t seed = 0;
    double mean_g = 0.0;
    double sigma_g = 0.0;
};

/// Couplings sorted in decreasing order and averaged over n equal blocks.
struct GroupedCouplings {
    int n_groups = 1;
    SpinJ j_sub;                       // 2 j_s = N / n per group
    std::vector<double> group_means;   // non-increasing
    double sample_mean = 0.0;

    int total_qubits() const { return n_groups * j_sub.twice_j(); }
};

/// Per-group protocol angles, calibrated on the sample mean:
/// phi_k = (pi/4) <g>_k / <g>,  theta_k = pi (<g>_k / <g>)^2.
struct EffectiveAngles {
    std::vector<double> phi;
    std::vector<double> theta;
};

namespace inhomogeneity {

/// Deterministic Gaussian sample (mt19937_64 + explicit Box-Muller, so a
/// fixed seed reproduces the same array on any platform).
CouplingSample sample_couplings(int N, double mean, double sigma, std::uint64_t seed);

/// Sort descending (ties by original index), split into n contiguous blocks,
/// average each block. Requires N % n == 0.
GroupedCouplings group_couplings(const CouplingSample& sample, int n);

EffectiveAngles effective_angles(const GroupedCouplings& groups, double phi_bar = M_PI / 4.0);

/// Default cap on allocated complex entries for the joint-state objects.
constexpr std::size_t kDefaultEntryCap = 2'000'000;

/// Full probability table of the grouped tensor-product protocol. Builds the
/// dim x dim first-window overlap matrices (closed erf/exp forms), so memory
/// scales as dim^2 with dim = (2 j_s + 1)^n; guarded by the entry cap.
ProbabilityTable inhomogeneous_probabilities(const GroupedCouplings& groups,
                                             const CavityAmplitude& alpha,
                                             std::size_t entry_cap = kDefaultEntryCap);

/// V only. Uses the Poisson expansion of the branch-overlap kernel, which
/// factorizes over groups; memory stays O(dim).
ViolationResult inhomogeneous_violation(const GroupedCouplings& groups,
                                        const CavityAmplitude& alpha,
                                        std::size_t entry_cap = kDefaultEntryCap);

struct SeedAverage {
    double mean_abs_v = 0.0;
    double std_error = 0.0;
    int n_seeds = 0;
};

/// |V| averaged over n_seeds independent coupling draws (seeds base..base+n-1),
/// evaluated in parallel.
SeedAverage seed_averaged_violation(int N, double mean, double sigma, int n_groups,
                                    const CavityAmplitude& alpha, int n_seeds = 32,
                                    std::uint64_t seed_base = 1,
                                    std::size_t entry_cap = kDefaultEntryCap);

}  // namespace inhomogeneity
}  // namespace ndc
