#include "bargmann/applications.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bargmann {

namespace {

EstimationMode with_stream(const EstimationMode& mode, std::uint64_t stream) {
    EstimationMode m = mode;
    if (!m.is_exact()) m.seed = derive_stream_seed(mode.seed, stream);
    return m;
}

}  // namespace

double hom_overlap(const MixedState& rho1, const MixedState& rho2,
                   const EstimationMode& mode) {
    const auto est = estimate_multivariate_trace({rho1, rho2}, mode);
    double overlap = 2.0 * est.P[0] - 1.0;
    if (!mode.is_exact()) {
        const double eps = effective_epsilon(mode);
        overlap = std::clamp(overlap, -2.0 * eps, 1.0 + 2.0 * eps);
    }
    return overlap;
}

double renyi_entropy(const MixedState& rho, int alpha, const EstimationMode& mode) {
    if (alpha < 2)
        throw std::invalid_argument("renyi_entropy: integer alpha >= 2 required");
    const std::vector<MixedState> copies(alpha, rho);
    const auto est = estimate_multivariate_trace(copies, mode);
    if (mode.is_exact()) {
        if (std::abs(est.delta.imag()) > 1e-8 || est.delta.real() <= 0.0)
            throw consistency_error("renyi_entropy: exact tr(rho^alpha) not real positive");
    } else if (est.delta.real() <= 0.0) {
        throw std::domain_error(
            "renyi_entropy: sampled trace estimate " +
            std::to_string(est.delta.real()) +
            " is not positive; entropy undefined (insufficient samples)");
    }
    return std::log(est.delta.real()) / (1.0 - static_cast<double>(alpha));
}

SpectrumReport spectrum_from_traces(const MixedState& rho, int rank_bound,
                                    const EstimationMode& mode) {
    if (rank_bound < 2)
        throw std::invalid_argument("spectrum_from_traces: rank_bound >= 2 required");
    std::vector<double> traces(rank_bound, 0.0);
    traces[0] = 1.0;  // tr rho = 1 for a normalized state
    for (int k = 2; k <= rank_bound; ++k) {
        const std::vector<MixedState> copies(k, rho);
        const auto est =
            estimate_multivariate_trace(copies, with_stream(mode, static_cast<std::uint64_t>(k)));
        traces[k - 1] = est.delta.real();
    }
    return spectrum_from_power_traces(std::move(traces));
}

SpectrumReport spectrum_from_power_traces(std::vector<double> power_traces) {
    const int n = static_cast<int>(power_traces.size());
    if (n < 2)
        throw std::invalid_argument("spectrum_from_power_traces: need traces up to order >= 2");
    SpectrumReport report;
    report.power_traces = std::move(power_traces);

    // Faddeev-LeVerrier / Newton recursion from power sums p_k to elementary
    // symmetric polynomials e_k: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i.
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (int i = 1; i <= k; ++i) {
            const double term = e[k - i] * report.power_traces[i - 1];
            acc += (i % 2 == 1) ? term : -term;
        }
        e[k] = acc / k;
    }
    report.char_poly_coeffs.assign(n + 1, 0.0);
    for (int k = 0; k <= n; ++k)
        report.char_poly_coeffs[k] = (k % 2 == 0) ? e[k] : -e[k];

    // Roots via the companion matrix of the monic polynomial.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i)
        companion(i, n - 1) = -report.char_poly_coeffs[n - i];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectrum_from_traces: companion eigensolve failed");

    report.eigenvalues.assign(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + n);
    std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
              [](const cplx& a, const cplx& b) { return a.real() > b.real(); });
    report.largest_eigenvalue = report.eigenvalues.front().real();

    constexpr double kEigTol = 1e-6;
    cplx sum = 0.0;
    for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
        const cplx& ev = report.eigenvalues[i];
        sum += ev;
        if (std::abs(ev.imag()) > kEigTol)
            report.anomalies.push_back("eigenvalue " + std::to_string(i) +
                                       " has imaginary part " + std::to_string(ev.imag()));
        if (ev.real() < -kEigTol || ev.real() > 1.0 + kEigTol)
            report.anomalies.push_back("eigenvalue " + std::to_string(i) +
                                       " outside [0, 1]: " + std::to_string(ev.real()));
    }
    if (std::abs(sum.real() - 1.0) > kEigTol)
        report.anomalies.push_back("eigenvalue sum deviates from 1: " +
                                   std::to_string(sum.real()));
    return report;
}

std::uint64_t kernel_pair_seed(std::uint64_t seed, int i, int j) {
    return derive_stream_seed(seed, (static_cast<std::uint64_t>(i) << 32) |
                                        static_cast<std::uint64_t>(j));
}

KernelResult kernel_matrix(const std::vector<MixedState>& encoded_states,
                           const EstimationMode& mode) {
    const int n = static_cast<int>(encoded_states.size());
    if (n < 2) throw std::invalid_argument("kernel_matrix: >= 2 states required");

    KernelResult result;
    result.K.resize(n, n);
    for (int i = 0; i < n; ++i)
        result.K(i, i) = hom_overlap(encoded_states[i], encoded_states[i],
                                     EstimationMode::exact());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            EstimationMode pair_mode = mode;
            if (!mode.is_exact()) {
                pair_mode.seed = kernel_pair_seed(mode.seed, i, j);
                result.pair_seeds.emplace_back(i, j, pair_mode.seed);
            }
            const double k_ij = hom_overlap(encoded_states[i], encoded_states[j], pair_mode);
            result.K(i, j) = k_ij;
            result.K(j, i) = k_ij;
        }
    }
    return result;
}

int classifier_eval(const std::vector<double>& K_row,
                    const std::vector<double>& coeffs,
                    const std::vector<int>& labels, double bias) {
    if (K_row.size() != coeffs.size() || K_row.size() != labels.size())
        throw std::invalid_argument("classifier_eval: length mismatch");
    double acc = bias;
    for (std::size_t i = 0; i < K_row.size(); ++i) {
        if (labels[i] != 1 && labels[i] != -1)
            throw std::invalid_argument("classifier_eval: labels must be +-1");
        acc += coeffs[i] * labels[i] * K_row[i];
    }
    return acc >= 0.0 ? +1 : -1;  // sign(0) := +1
}

double husimi_q(const MixedState& rho, const std::vector<cplx>& alpha, int cutoff,
                const EstimationMode& mode) {
    if (static_cast<int>(alpha.size()) != rho.layout().num_internal)
        throw std::invalid_argument("husimi_q: alpha dimension != internal modes");
    const auto coherent = truncated_coherent_state(alpha, cutoff, 1e-7);
    return hom_overlap(rho, MixedState::from_pure(coherent.state), mode) /
           std::numbers::pi;
}

cplx kirkwood_dirac(const MixedState& rho, const PureState& a_state,
                    const PureState& b_state, const EstimationMode& mode) {
    const auto est = estimate_multivariate_trace(
        {MixedState::from_pure(a_state), rho, MixedState::from_pure(b_state)}, mode);
    return est.delta;
}

cplx positive_p(const MixedState& rho, const std::vector<cplx>& alpha,
                const std::vector<cplx>& beta, int cutoff,
                const EstimationMode& mode) {
    const auto coherent_a = truncated_coherent_state(alpha, cutoff, 1e-7);
    const auto coherent_b = truncated_coherent_state(beta, cutoff, 1e-7);
    const auto est = estimate_multivariate_trace(
        {MixedState::from_pure(coherent_a.state), rho,
         MixedState::from_pure(coherent_b.state)},
        mode);
    return est.delta / (std::numbers::pi * std::numbers::pi);
}

TruncatedState displaced_fock_state(cplx alpha, int n, int cutoff) {
    if (n < 0) throw std::invalid_argument("displaced_fock_state: n >= 0 required");
    const auto base = truncated_coherent_state({alpha}, cutoff);

    // D(alpha)|n> = (a' - conj(alpha))^n |alpha> / sqrt(n!); work on a dense
    // per-photon-number amplitude vector and grow it as a' raises.
    std::vector<cplx> c(cutoff + 1, cplx{0.0, 0.0});
    for (const auto& [key, amp] : base.state.amps) c[key[0]] = amp;
    // undo the truncation renormalization so the exact-state tail is tracked
    const double base_scale = std::sqrt(std::max(0.0, 1.0 - base.tail_mass));
    for (auto& a : c) a *= base_scale;

    for (int step = 0; step < n; ++step) {
        std::vector<cplx> next(c.size() + 1, cplx{0.0, 0.0});
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += std::sqrt(static_cast<double>(k + 1)) * c[k];
            next[k] -= std::conj(alpha) * c[k];
        }
        c = std::move(next);
    }
    double n_fact = 1.0;
    for (int k = 1; k <= n; ++k) n_fact *= k;
    for (auto& a : c) a /= std::sqrt(n_fact);

    PureState psi;
    psi.layout = ModeLayout{1, 1};
    double norm2 = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        norm2 += std::norm(c[k]);
        if (std::abs(c[k]) >= kAmplitudePruneEps)
            psi.amps[{static_cast<int>(k)}] = c[k];
    }
    if (psi.amps.empty())
        throw truncation_error("displaced_fock_state: cutoff too small, state vanished",
                               1.0, cutoff + n);
    psi.normalize();
    return TruncatedState{std::move(psi), std::max(0.0, 1.0 - norm2)};
}

double wigner_point(const MixedState& rho, const std::vector<cplx>& alpha,
                    int n_max, int cutoff, const EstimationMode& mode,
                    double series_tol) {
    if (rho.layout().num_internal != 1 || alpha.size() != 1)
        throw std::invalid_argument(
            "wigner_point: supports a single internal mode (d = 1)");
    if (n_max < 0) {
        for (const auto& comp : rho.components)
            n_max = std::max(n_max, comp.state.max_photons());
    }

    double signed_sum = 0.0;
    double mass = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        const auto displaced = displaced_fock_state(alpha[0], n, cutoff);
        const double term = hom_overlap(rho, MixedState::from_pure(displaced.state),
                                        with_stream(mode, static_cast<std::uint64_t>(n)));
        signed_sum += (n % 2 == 0) ? term : -term;
        mass += std::max(term, 0.0);
    }
    // The overlaps sum to tr(rho) = 1 over all n, so the unseen remainder is
    // bounded by the missing mass.
    const double remainder = std::max(0.0, 1.0 - mass);
    if (remainder > series_tol)
        throw truncation_error("wigner_point: series remainder bound " +
                                   std::to_string(remainder) + " exceeds tolerance; " +
                                   "increase n_max",
                               remainder, -1);
    return 2.0 * signed_sum / std::numbers::pi;
}

}  // namespace bargmann
