#include "bargmann/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bargmann {

EstimationMode EstimationMode::sampled(long N, std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("sampled mode needs N >= 1");
    EstimationMode m;
    m.kind = Kind::sampled;
    m.num_samples = N;
    m.seed = seed;
    return m;
}

EstimationMode EstimationMode::sampled_with_bound(double epsilon, double delta_fail,
                                                  std::uint64_t seed) {
    EstimationMode m;
    m.kind = Kind::sampled;
    m.num_samples = sample_count(epsilon, delta_fail);
    m.seed = seed;
    m.epsilon = epsilon;
    m.delta_fail = delta_fail;
    return m;
}

int bin_function(const OutcomePattern& S) {
    const int M = static_cast<int>(S.size());
    if (M < 1) throw std::invalid_argument("bin_function: empty pattern");
    long acc = 0;
    for (int j = 0; j < M; ++j) acc += static_cast<long>(j) * S[j];
    return static_cast<int>(acc % M);
}

OutcomePattern aggregate_counts(const Occupation& v, const ModeLayout& layout) {
    if (static_cast<int>(v.size()) != layout.total_modes())
        throw std::invalid_argument("aggregate_counts: occupation length mismatch");
    OutcomePattern S(layout.num_systems, 0);
    for (int j = 0; j < layout.num_systems; ++j)
        for (int alpha = 0; alpha < layout.num_internal; ++alpha)
            S[j] += v[layout.flat(j, alpha)];
    return S;
}

PatternDistribution exact_pattern_distribution(const MixedState& omega_out) {
    PatternDistribution dist;
    double total = 0.0;
    for (const auto& comp : omega_out.components) {
        for (const auto& [key, amp] : comp.state.amps) {
            const double p = comp.weight * std::norm(amp);
            dist[aggregate_counts(key, comp.state.layout)] += p;
            total += p;
        }
    }
    if (total <= 0.0)
        throw std::invalid_argument("exact_pattern_distribution: zero total mass");
    if (std::abs(total - 1.0) > kNormTol)
        throw consistency_error("pattern distribution mass deviates from 1 beyond 1e-10");
    for (auto& [pattern, p] : dist) p /= total;
    return dist;
}

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

double counter_uniform01(std::uint64_t seed, std::uint64_t index) {
    // SplitMix64 evaluated at counter position `index`; no sequential state.
    const std::uint64_t z = mix64(seed + (index + 1) * kGolden);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed ^ mix64(stream + kGolden));
}

std::vector<OutcomePattern> sample_patterns(const PatternDistribution& dist,
                                            long N, std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("sample_patterns: N >= 1 required");
    if (dist.empty()) throw std::invalid_argument("sample_patterns: empty distribution");

    std::vector<const OutcomePattern*> patterns;
    std::vector<double> cdf;
    patterns.reserve(dist.size());
    cdf.reserve(dist.size());
    double acc = 0.0;
    for (const auto& [pattern, p] : dist) {
        if (p < -kNormTol || p > 1.0 + kNormTol)
            throw std::invalid_argument("sample_patterns: probability outside [0,1]");
        acc += p;
        patterns.push_back(&pattern);
        cdf.push_back(acc);
    }
    if (std::abs(acc - 1.0) > kNormTol)
        throw std::invalid_argument("sample_patterns: distribution not normalized");
    cdf.back() = 1.0;

    std::vector<OutcomePattern> out;
    out.reserve(N);
    for (long i = 0; i < N; ++i) {
        const double u = counter_uniform01(seed, static_cast<std::uint64_t>(i));
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t idx = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
        out.push_back(*patterns[idx]);
    }
    return out;
}

std::vector<double> exact_binned(const PatternDistribution& dist, int M) {
    std::vector<double> P(M, 0.0);
    for (const auto& [pattern, p] : dist) {
        if (static_cast<int>(pattern.size()) != M)
            throw std::invalid_argument("exact_binned: pattern length != M");
        P[bin_function(pattern)] += p;
    }
    return P;
}

std::vector<double> estimate_binned(const std::vector<OutcomePattern>& samples, int M) {
    if (samples.empty())
        throw std::invalid_argument("estimate_binned: no samples");
    std::vector<long> counts(M, 0);
    for (const auto& s : samples) {
        if (static_cast<int>(s.size()) != M)
            throw std::invalid_argument("estimate_binned: pattern length != M");
        ++counts[bin_function(s)];
    }
    std::vector<double> P(M);
    for (int j = 0; j < M; ++j)
        P[j] = static_cast<double>(counts[j]) / static_cast<double>(samples.size());
    return P;
}

std::vector<cplx> recover_X(const std::vector<double>& P) {
    const int M = static_cast<int>(P.size());
    if (M < 1) throw std::invalid_argument("recover_X: empty P");
    std::vector<cplx> omega_pow(M);
    for (int t = 0; t < M; ++t)
        omega_pow[t] = std::polar(1.0, 2.0 * std::numbers::pi * t / M);
    std::vector<cplx> X(M, cplx{0.0, 0.0});
    for (int k = 0; k < M; ++k)
        for (int j = 0; j < M; ++j) X[k] += omega_pow[(j * k) % M] * P[j];
    return X;
}

std::vector<cplx> forward_P(const std::vector<cplx>& X) {
    const int M = static_cast<int>(X.size());
    if (M < 1) throw std::invalid_argument("forward_P: empty X");
    std::vector<cplx> omega_pow(M);
    for (int t = 0; t < M; ++t)
        omega_pow[t] = std::polar(1.0, -2.0 * std::numbers::pi * t / M);
    std::vector<cplx> P(M, cplx{0.0, 0.0});
    for (int j = 0; j < M; ++j) {
        for (int k = 0; k < M; ++k) P[j] += omega_pow[(j * k) % M] * X[k];
        P[j] /= static_cast<double>(M);
    }
    return P;
}

long sample_count(double epsilon, double delta_fail) {
    if (epsilon <= 0.0) throw std::invalid_argument("sample_count: epsilon > 0 required");
    if (delta_fail <= 0.0 || delta_fail >= 1.0)
        throw std::invalid_argument("sample_count: delta_fail in (0,1) required");
    return static_cast<long>(
        std::ceil(std::log(2.0 / delta_fail) / (2.0 * epsilon * epsilon)));
}

double effective_epsilon(const EstimationMode& mode) {
    if (mode.is_exact()) return 0.0;
    if (mode.epsilon) return *mode.epsilon;
    return std::sqrt(std::log(2.0 / 0.05) /
                     (2.0 * static_cast<double>(mode.num_samples)));
}

PatternDistribution pattern_distribution_after(const ModeUnitary& U,
                                               const std::vector<MixedState>& states) {
    const MixedState omega = tensor_product(states);
    const MixedState omega_out = apply_to_mixture(U, omega);
    return exact_pattern_distribution(omega_out);
}

InvariantEstimate estimate_multivariate_trace(const std::vector<MixedState>& states,
                                              const EstimationMode& mode) {
    const int M = static_cast<int>(states.size());
    if (M < 2)
        throw std::invalid_argument("estimate_multivariate_trace: M >= 2 required");

    const PatternDistribution dist =
        pattern_distribution_after(fourier_matrix(M).adjoint(), states);

    InvariantEstimate est;
    est.num_states = M;
    est.num_internal = states.front().layout().num_internal;
    est.mode = mode;
    est.bin_stderr.assign(M, 0.0);
    if (mode.is_exact()) {
        est.P = exact_binned(dist, M);
    } else {
        const auto samples = sample_patterns(dist, mode.num_samples, mode.seed);
        est.P = estimate_binned(samples, M);
        for (int j = 0; j < M; ++j)
            est.bin_stderr[j] = std::sqrt(est.P[j] * (1.0 - est.P[j]) /
                                          static_cast<double>(mode.num_samples));
    }
    est.X = recover_X(est.P);
    est.delta = est.X[1];
    return est;
}

}  // namespace bargmann
