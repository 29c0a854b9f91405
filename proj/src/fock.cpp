#include "bargmann/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bargmann {

int photon_count(const Occupation& v) {
    return std::accumulate(v.begin(), v.end(), 0);
}

double PureState::norm_squared() const {
    double s = 0.0;
    for (const auto& [key, amp] : amps) s += std::norm(amp);
    return s;
}

PureState& PureState::normalize() {
    const double n2 = norm_squared();
    if (n2 <= 0.0)
        throw std::invalid_argument("cannot normalize a zero state");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& [key, amp] : amps) amp *= inv;
    return *this;
}

PureState& PureState::prune(double eps) {
    for (auto it = amps.begin(); it != amps.end();) {
        if (std::abs(it->second) < eps)
            it = amps.erase(it);
        else
            ++it;
    }
    return *this;
}

int PureState::max_photons() const {
    int n = 0;
    for (const auto& [key, amp] : amps) n = std::max(n, photon_count(key));
    return n;
}

MixedState::MixedState(std::vector<MixedComponent> comps)
    : components(std::move(comps)) {
    if (components.empty())
        throw std::invalid_argument("MixedState needs at least one component");
    double total = 0.0;
    for (const auto& c : components) {
        if (c.weight <= 0.0 || c.weight > 1.0 + kNormTol)
            throw std::invalid_argument("mixture weight outside (0, 1]");
        if (!(c.state.layout == components.front().state.layout))
            throw std::invalid_argument("mixture components disagree on layout");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > kNormTol)
        throw std::invalid_argument("mixture weights do not sum to 1");
}

MixedState MixedState::from_pure(PureState psi) {
    MixedState rho;
    rho.components.push_back({1.0, std::move(psi)});
    return rho;
}

std::uint64_t sector_size(int total_photons, int num_modes, std::uint64_t cap) {
    if (num_modes < 1) throw std::invalid_argument("num_modes must be >= 1");
    if (total_photons < 0) throw std::invalid_argument("negative photon number");
    // C(n+m-1, n) built multiplicatively with overflow detection.
    const std::uint64_t limit = cap == 0 ? UINT64_MAX / 2 : cap;
    std::uint64_t result = 1;
    for (int i = 1; i <= total_photons; ++i) {
        const std::uint64_t numer = static_cast<std::uint64_t>(num_modes - 1 + i);
        if (result > UINT64_MAX / numer)
            throw capacity_error("Fock sector size overflows 64 bits");
        result = result * numer / static_cast<std::uint64_t>(i);
        if (result > limit)
            throw capacity_error("Fock sector size " + std::to_string(result) +
                                 "+ exceeds cap " + std::to_string(limit));
    }
    return result;
}

namespace {

void compositions_rec(int n, int m, Occupation& prefix,
                      std::vector<Occupation>& out) {
    if (m == 1) {
        prefix.push_back(n);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int k = n; k >= 0; --k) {
        prefix.push_back(k);
        compositions_rec(n - k, m - 1, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<Occupation> enumerate_sector(int total_photons, int num_modes) {
    const std::uint64_t count = sector_size(total_photons, num_modes);
    std::vector<Occupation> out;
    out.reserve(count);
    Occupation prefix;
    prefix.reserve(num_modes);
    compositions_rec(total_photons, num_modes, prefix, out);
    return out;
}

cplx inner_product(const PureState& a, const PureState& b) {
    if (!(a.layout == b.layout))
        throw std::invalid_argument("inner_product: layout mismatch");
    cplx result = 0.0;
    auto ia = a.amps.begin();
    auto ib = b.amps.begin();
    while (ia != a.amps.end() && ib != b.amps.end()) {
        if (ia->first < ib->first)
            ++ia;
        else if (ib->first < ia->first)
            ++ib;
        else {
            result += std::conj(ia->second) * ib->second;
            ++ia;
            ++ib;
        }
    }
    return result;
}

PureState tensor_product_pure(const std::vector<PureState>& states) {
    if (states.empty())
        throw std::invalid_argument("tensor_product: empty state list");
    const int d = states.front().layout.num_internal;
    int systems = 0;
    for (const auto& s : states) {
        if (s.layout.num_internal != d)
            throw std::invalid_argument("tensor_product: internal dimensions differ");
        systems += s.layout.num_systems;
    }
    PureState out;
    out.layout = ModeLayout{systems, d};
    out.amps[{}] = 1.0;  // seed with the empty key, extended state by state
    for (const auto& s : states) {
        std::map<Occupation, cplx> next;
        for (const auto& [prefix, pamp] : out.amps) {
            for (const auto& [key, amp] : s.amps) {
                Occupation joined = prefix;
                joined.insert(joined.end(), key.begin(), key.end());
                next[std::move(joined)] = pamp * amp;
            }
        }
        out.amps = std::move(next);
    }
    out.prune();
    return out;
}

MixedState tensor_product(const std::vector<MixedState>& states) {
    if (states.empty())
        throw std::invalid_argument("tensor_product: empty state list");
    const int d = states.front().layout().num_internal;
    for (const auto& s : states) {
        if (s.layout().num_systems != 1)
            throw std::invalid_argument("tensor_product: inputs must be single-system");
        if (s.layout().num_internal != d)
            throw std::invalid_argument("tensor_product: internal dimensions differ");
    }
    // Cartesian product over mixture components, weights multiplied.
    std::vector<MixedComponent> comps;
    std::vector<std::size_t> idx(states.size(), 0);
    while (true) {
        double w = 1.0;
        std::vector<PureState> pures;
        pures.reserve(states.size());
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto& c = states[i].components[idx[i]];
            w *= c.weight;
            pures.push_back(c.state);
        }
        comps.push_back({w, tensor_product_pure(pures)});
        std::size_t i = 0;
        while (i < states.size() && ++idx[i] == states[i].components.size()) {
            idx[i] = 0;
            ++i;
        }
        if (i == states.size()) break;
    }
    return MixedState(std::move(comps));
}

PureState single_photon_state(const std::vector<cplx>& internal_amplitudes) {
    if (internal_amplitudes.empty())
        throw std::invalid_argument("single_photon_state: empty amplitude vector");
    const int d = static_cast<int>(internal_amplitudes.size());
    PureState psi;
    psi.layout = ModeLayout{1, d};
    for (int alpha = 0; alpha < d; ++alpha) {
        if (internal_amplitudes[alpha] == cplx{0.0, 0.0}) continue;
        Occupation key(d, 0);
        key[alpha] = 1;
        psi.amps[std::move(key)] = internal_amplitudes[alpha];
    }
    if (psi.amps.empty())
        throw std::invalid_argument("single_photon_state: zero amplitude vector");
    psi.normalize();
    return psi;
}

PureState basis_state(const ModeLayout& layout, Occupation occupations) {
    if (static_cast<int>(occupations.size()) != layout.total_modes())
        throw std::invalid_argument("basis_state: occupation length mismatch");
    for (int n : occupations)
        if (n < 0) throw std::invalid_argument("basis_state: negative occupation");
    PureState psi;
    psi.layout = layout;
    psi.amps[std::move(occupations)] = 1.0;
    return psi;
}

PureState vacuum_state(const ModeLayout& layout) {
    return basis_state(layout, Occupation(layout.total_modes(), 0));
}

namespace {

double poisson_tail(double lambda, int cutoff) {
    // 1 - sum_{k<=cutoff} e^-lambda lambda^k / k!, accumulated in log-free form
    double term = std::exp(-lambda);
    double cdf = term;
    for (int k = 1; k <= cutoff; ++k) {
        term *= lambda / k;
        cdf += term;
    }
    return std::max(0.0, 1.0 - cdf);
}

}  // namespace

int suggest_coherent_cutoff(const std::vector<cplx>& beta, double tol) {
    double lambda = 0.0;
    for (const auto& b : beta) lambda += std::norm(b);
    int cutoff = 0;
    while (poisson_tail(lambda, cutoff) > tol) {
        ++cutoff;
        if (cutoff > 4096)
            throw capacity_error("coherent cutoff search exceeded 4096 photons");
    }
    return cutoff;
}

TruncatedState truncated_coherent_state(const std::vector<cplx>& beta, int cutoff,
                                        std::optional<double> tail_tolerance) {
    if (beta.empty())
        throw std::invalid_argument("truncated_coherent_state: empty beta");
    if (cutoff < 0)
        throw std::invalid_argument("truncated_coherent_state: negative cutoff");
    const int d = static_cast<int>(beta.size());
    double lambda = 0.0;
    for (const auto& b : beta) lambda += std::norm(b);
    const double envelope = std::exp(-lambda / 2.0);

    PureState psi;
    psi.layout = ModeLayout{1, d};
    for (int n = 0; n <= cutoff; ++n) {
        for (const auto& key : enumerate_sector(n, d)) {
            // prod_alpha beta^n_alpha / sqrt(n_alpha!)
            cplx amp = envelope;
            for (int alpha = 0; alpha < d; ++alpha) {
                for (int k = 1; k <= key[alpha]; ++k)
                    amp *= beta[alpha] / std::sqrt(static_cast<double>(k));
            }
            if (std::abs(amp) < kAmplitudePruneEps) continue;
            psi.amps[key] = amp;
        }
    }
    const double tail = poisson_tail(lambda, cutoff);
    if (tail_tolerance && tail > *tail_tolerance) {
        throw truncation_error(
            "coherent truncation discards mass " + std::to_string(tail) +
                " > tolerance; use cutoff >= " +
                std::to_string(suggest_coherent_cutoff(beta, *tail_tolerance)),
            tail, suggest_coherent_cutoff(beta, *tail_tolerance));
    }
    if (psi.amps.empty())
        psi.amps[Occupation(d, 0)] = 1.0;  // fully truncated: vacuum remains
    psi.normalize();
    return TruncatedState{std::move(psi), tail};
}

PureState dual_rail_qubit(double theta, double phi) {
    PureState psi;
    psi.layout = ModeLayout{1, 2};
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    if (std::abs(c) >= kAmplitudePruneEps) psi.amps[{1, 0}] = c;
    if (std::abs(s) >= kAmplitudePruneEps)
        psi.amps[{0, 1}] = std::polar(s, phi);
    psi.normalize();
    return psi;
}

}  // namespace bargmann
