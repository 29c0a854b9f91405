#include "bargmann/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace bargmann {
namespace oracle {

cplx direct_multivariate_trace(const std::vector<MixedState>& states) {
    const int M = static_cast<int>(states.size());
    if (M < 1) throw std::invalid_argument("direct_multivariate_trace: empty state list");
    const int d = states.front().layout().num_internal;
    for (const auto& s : states) {
        if (s.layout().num_systems != 1)
            throw std::invalid_argument("direct_multivariate_trace: single-system states required");
        if (s.layout().num_internal != d)
            throw std::invalid_argument("direct_multivariate_trace: internal dimensions differ");
    }

    // Multilinear expansion over mixture components; each pure tuple
    // contributes its Gram chain.
    cplx total = 0.0;
    std::vector<std::size_t> idx(M, 0);
    while (true) {
        double w = 1.0;
        for (int i = 0; i < M; ++i) w *= states[i].components[idx[i]].weight;
        cplx chain = 1.0;
        for (int i = 0; i < M; ++i) {
            const PureState& a = states[i].components[idx[i]].state;
            const PureState& b = states[(i + 1) % M].components[idx[(i + 1) % M]].state;
            chain *= inner_product(a, b);
            if (chain == cplx{0.0, 0.0}) break;
        }
        total += w * chain;
        int i = 0;
        while (i < M && ++idx[i] == states[i].components.size()) {
            idx[i] = 0;
            ++i;
        }
        if (i == M) break;
    }
    return total;
}

namespace {

// Occupation with system blocks rotated left by k: result block j holds the
// input's block j+k (the ket action of the cyclic shift lifted by the
// Fourier conjugation F D F').
Occupation rotate_blocks_left(const Occupation& v, const ModeLayout& layout, int k) {
    const int M = layout.num_systems;
    const int d = layout.num_internal;
    Occupation out(v.size());
    for (int j = 0; j < M; ++j) {
        const int src = (j + k) % M;
        for (int alpha = 0; alpha < d; ++alpha)
            out[layout.flat(j, alpha)] = v[layout.flat(src, alpha)];
    }
    return out;
}

}  // namespace

cplx cyclic_expectation(const MixedState& omega, int k) {
    const int M = omega.layout().num_systems;
    const int kk = ((k % M) + M) % M;
    if (kk == 0) return 1.0;
    cplx total = 0.0;
    for (const auto& comp : omega.components) {
        cplx part = 0.0;
        for (const auto& [key, amp] : comp.state.amps) {
            const Occupation shifted = rotate_blocks_left(key, comp.state.layout, kk);
            const auto it = comp.state.amps.find(shifted);
            if (it == comp.state.amps.end()) continue;
            part += std::conj(it->second) * amp;
        }
        total += comp.weight * part;
    }
    return total;
}

double symmetric_projection_weight(const MixedState& omega) {
    const int M = omega.layout().num_systems;
    cplx acc = 0.0;
    for (int k = 0; k < M; ++k) acc += cyclic_expectation(omega, k);
    acc /= static_cast<double>(M);
    if (std::abs(acc.imag()) > kNormTol)
        throw consistency_error("symmetric projection weight has imaginary part " +
                                std::to_string(acc.imag()));
    return acc.real();
}

SymmetryReport certify_cyclic_symmetry(const MixedState& omega, double tol) {
    const int M = omega.layout().num_systems;
    double worst = 0.0;
    for (int k = 0; k < M; ++k)
        worst = std::max(worst, std::abs(cyclic_expectation(omega, k) - cplx{1.0, 0.0}));
    const double p0 = symmetric_projection_weight(omega);
    return SymmetryReport{std::abs(p0 - 1.0) <= tol, p0, worst};
}

}  // namespace oracle
}  // namespace bargmann
