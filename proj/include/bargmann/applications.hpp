#pragma once

#include <Eigen/Dense>
#include <string>

#include "bargmann/protocol.hpp"

namespace bargmann {

/// tr(rho_1 rho_2) estimated as 2*P_0 - 1 from the generalized two-state
/// interference test. In sampled mode the raw value is clipped to
/// [-2 eps, 1 + 2 eps].
double hom_overlap(const MixedState& rho1, const MixedState& rho2,
                   const EstimationMode& mode);

/// H_alpha(rho) = ln tr(rho^alpha) / (1 - alpha), alpha >= 2 integer.
/// Throws when a sampled trace estimate is non-positive.
double renyi_entropy(const MixedState& rho, int alpha, const EstimationMode& mode);

struct SpectrumReport {
    std::vector<double> power_traces;      // t_k = tr rho^k, k = 1..n
    std::vector<double> char_poly_coeffs;  // monic, descending powers; length n+1
    std::vector<cplx> eigenvalues;         // roots, sorted descending by real part
    double largest_eigenvalue = 0.0;
    std::vector<std::string> anomalies;    // flagged (never silently clipped)
};

/// Estimates tr(rho^k) for k = 2..rank_bound, converts the power sums to
/// characteristic-polynomial coefficients by the Faddeev-LeVerrier (Newton
/// identity) recursion, and extracts the eigenvalues as the roots.
SpectrumReport spectrum_from_traces(const MixedState& rho, int rank_bound,
                                    const EstimationMode& mode);

/// Postprocessing half of spectrum_from_traces: power sums t_1..t_n in,
/// polynomial and roots out. t_1 must be (approximately) 1.
SpectrumReport spectrum_from_power_traces(std::vector<double> power_traces);

struct KernelResult {
    Eigen::MatrixXd K;
    // (i, j, seed) per unordered pair evaluated in sampled mode
    std::vector<std::tuple<int, int, std::uint64_t>> pair_seeds;
};

std::uint64_t kernel_pair_seed(std::uint64_t seed, int i, int j);

/// K_ij = overlap of encodings i and j, one evaluation per unordered pair;
/// diagonal always taken from the exact path.
KernelResult kernel_matrix(const std::vector<MixedState>& encoded_states,
                           const EstimationMode& mode);

/// sign(sum_i a_i y_i K_i + b) with sign(0) := +1.
int classifier_eval(const std::vector<double>& K_row,
                    const std::vector<double>& coeffs,
                    const std::vector<int>& labels, double bias);

/// Q(alpha) = tr(rho |alpha><alpha|) / pi via the two-state test against a
/// truncated coherent state (cutoff must keep the tail below 1e-7).
double husimi_q(const MixedState& rho, const std::vector<cplx>& alpha, int cutoff,
                const EstimationMode& mode);

/// tr(|a><a| rho |b><b|) = <a|rho|b><b|a> via the third-order pipeline.
cplx kirkwood_dirac(const MixedState& rho, const PureState& a_state,
                    const PureState& b_state, const EstimationMode& mode);

/// P(alpha, beta) = tr(|alpha><alpha| rho |beta><beta|) / pi^2.
cplx positive_p(const MixedState& rho, const std::vector<cplx>& alpha,
                const std::vector<cplx>& beta, int cutoff,
                const EstimationMode& mode);

/// Displaced Fock state D(alpha)|n> on one mode, built by applying
/// (a' - conj(alpha))^n to a truncated |alpha>; tail mass reported.
TruncatedState displaced_fock_state(cplx alpha, int n, int cutoff);

/// W(alpha) = (2/pi) sum_n (-1)^n tr(rho D|n><n|D'), summed to n_max
/// (n_max < 0 picks rho's maximum photon number, exact for alpha = 0).
/// Throws when the series remainder bound exceeds series_tol.
double wigner_point(const MixedState& rho, const std::vector<cplx>& alpha,
                    int n_max, int cutoff, const EstimationMode& mode,
                    double series_tol = 1e-6);

}  // namespace bargmann
