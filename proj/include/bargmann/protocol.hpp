#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bargmann/fock.hpp"
#include "bargmann/interferometer.hpp"

namespace bargmann {

/// Probability of each coarse-grained photon-count pattern S.
using PatternDistribution = std::map<OutcomePattern, double>;

/// How an estimate is produced: exact aggregation of the output
/// distribution, or Monte-Carlo sampling from it.
struct EstimationMode {
    enum class Kind { exact, sampled };

    Kind kind = Kind::exact;
    long num_samples = 0;
    std::uint64_t seed = 0;
    std::optional<double> epsilon;     // set when derived from (eps, delta)
    std::optional<double> delta_fail;

    static EstimationMode exact() { return {}; }
    static EstimationMode sampled(long N, std::uint64_t seed);
    /// N chosen by the Hoeffding bound for the requested precision.
    static EstimationMode sampled_with_bound(double epsilon, double delta_fail,
                                             std::uint64_t seed);

    bool is_exact() const { return kind == Kind::exact; }
};

/// f(S) = sum_j j*S_j mod M with M = S.size().
int bin_function(const OutcomePattern& S);

/// S_j = sum_alpha v[flat(j, alpha)].
OutcomePattern aggregate_counts(const Occupation& v, const ModeLayout& layout);

/// Born-rule pattern probabilities of a (finite-support) state, aggregated
/// over internal modes and mixture-weighted; renormalized.
PatternDistribution exact_pattern_distribution(const MixedState& omega_out);

/// N i.i.d. categorical draws. Draw i depends only on (seed, i), so chunked
/// or parallel evaluation reproduces the serial sequence exactly.
std::vector<OutcomePattern> sample_patterns(const PatternDistribution& dist,
                                            long N, std::uint64_t seed);

/// The per-draw uniform variate underlying sample_patterns.
double counter_uniform01(std::uint64_t seed, std::uint64_t index);

/// Statistically independent child seed for a named substream.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);

std::vector<double> exact_binned(const PatternDistribution& dist, int M);
std::vector<double> estimate_binned(const std::vector<OutcomePattern>& samples, int M);

/// X_k = sum_j omega^{jk} P_j; inverse of P_j = (1/M) sum_k omega^{-jk} X_k.
std::vector<cplx> recover_X(const std::vector<double>& P);

/// Forward transform, for round-trip checks: P_j = (1/M) sum_k omega^{-jk} X_k.
std::vector<cplx> forward_P(const std::vector<cplx>& X);

/// ceil(ln(2/delta_fail) / (2 epsilon^2)).
long sample_count(double epsilon, double delta_fail);

/// The mode's epsilon; for a bare-N mode, the epsilon whose Hoeffding count
/// at delta = 0.05 would have been N. Exact mode has no epsilon (returns 0).
double effective_epsilon(const EstimationMode& mode);

struct InvariantEstimate {
    int num_states = 0;             // M
    int num_internal = 1;           // d
    EstimationMode mode;
    std::vector<double> P;          // binned probabilities, length M
    std::vector<double> bin_stderr; // binomial SE per bin (zero in exact mode)
    std::vector<cplx> X;            // cyclic expectation values, length M
    cplx delta;                     // X_1, the multivariate trace estimate

    long sample_count() const { return mode.num_samples; }
    double confidence() const { return 1.0 - mode.delta_fail.value_or(0.0); }
};

/// Full pipeline: tensor the inputs, apply the inverse Fourier
/// interferometer, measure aggregate counts, bin by f, recover X by DFT.
/// Requires M >= 2 single-system states of equal internal dimension.
InvariantEstimate estimate_multivariate_trace(const std::vector<MixedState>& states,
                                              const EstimationMode& mode);

/// Pattern distribution after interfering the tensor product under an
/// arbitrary mode unitary (the pipeline uses fourier_matrix(M).adjoint()).
PatternDistribution pattern_distribution_after(const ModeUnitary& U,
                                               const std::vector<MixedState>& states);

}  // namespace bargmann
