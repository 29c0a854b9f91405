#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bargmann/errors.hpp"

namespace bargmann {

using cplx = std::complex<double>;

/// Amplitudes smaller than this are dropped after arithmetic to bound
/// sparse-map growth; the value sits below the double-precision noise floor.
inline constexpr double kAmplitudePruneEps = 1e-14;

/// Tolerance for normalization and unitarity invariants.
inline constexpr double kNormTol = 1e-10;

/// Index layout of a register of M bosonic systems, each carrying d internal
/// modes. The global flat ordering is flat(j, alpha) = j*d + alpha; every
/// module uses this convention.
struct ModeLayout {
    int num_systems = 1;   // M
    int num_internal = 1;  // d

    int total_modes() const { return num_systems * num_internal; }

    int flat(int system, int internal) const {
        return system * num_internal + internal;
    }

    std::pair<int, int> unflat(int mode) const {
        return {mode / num_internal, mode % num_internal};
    }

    bool operator==(const ModeLayout&) const = default;
};

/// Photon counts over the flat (system x internal) mode grid; the Fock basis
/// label. Length must equal layout.total_modes().
using Occupation = std::vector<int>;

/// Aggregate per-system photon counts S_j = sum_alpha n_{j,alpha}; length M.
using OutcomePattern = std::vector<int>;

int photon_count(const Occupation& v);

/// Sparse complex amplitude map over occupation vectors. Absent keys mean
/// amplitude zero. Keys of differing total photon number may coexist, so a
/// state can be a superposition of particle numbers.
struct PureState {
    ModeLayout layout;
    std::map<Occupation, cplx> amps;

    double norm_squared() const;
    PureState& normalize();  // throws std::invalid_argument on zero norm
    PureState& prune(double eps = kAmplitudePruneEps);
    int max_photons() const;
};

/// Convex mixture of pure states; the representation of a density operator.
struct MixedComponent {
    double weight;
    PureState state;
};

struct MixedState {
    std::vector<MixedComponent> components;

    MixedState() = default;
    explicit MixedState(std::vector<MixedComponent> comps);  // validates
    static MixedState from_pure(PureState psi);

    const ModeLayout& layout() const { return components.front().state.layout; }
};

/// Number of weak compositions C(n+m-1, n); throws capacity_error when the
/// count overflows or exceeds `cap` (pass 0 for "no cap").
std::uint64_t sector_size(int total_photons, int num_modes, std::uint64_t cap = 0);

/// All occupation vectors of `num_modes` modes with the given photon total,
/// in lexicographically descending order: (n,0,...,0) first, (0,...,0,n) last.
std::vector<Occupation> enumerate_sector(int total_photons, int num_modes);

/// <a|b> over the shared sparse support. Conjugate-symmetric.
cplx inner_product(const PureState& a, const PureState& b);

PureState tensor_product_pure(const std::vector<PureState>& states);

/// Tensor product of single-system states (each M=1, identical d) into one
/// register state on M = states.size() systems. Mixture components multiply.
MixedState tensor_product(const std::vector<MixedState>& states);

/// One photon distributed over the d internal modes of a single system.
PureState single_photon_state(const std::vector<cplx>& internal_amplitudes);

PureState basis_state(const ModeLayout& layout, Occupation occupations);
PureState vacuum_state(const ModeLayout& layout);

struct TruncatedState {
    PureState state;   // renormalized
    double tail_mass;  // probability mass discarded by the cutoff
};

/// Multimode coherent state |beta> truncated to total photon number <=
/// cutoff and renormalized. When `tail_tolerance` is set and the discarded
/// mass exceeds it, throws truncation_error carrying a suggested cutoff.
TruncatedState truncated_coherent_state(const std::vector<cplx>& beta, int cutoff,
                                        std::optional<double> tail_tolerance = {});

/// Smallest cutoff whose Poisson tail mass at |beta|^2 is <= tol.
int suggest_coherent_cutoff(const std::vector<cplx>& beta, double tol);

/// cos(theta/2)|1,0> + e^{i phi} sin(theta/2)|0,1> over d=2 internal rails.
PureState dual_rail_qubit(double theta, double phi);

}  // namespace bargmann
