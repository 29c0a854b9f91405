#pragma once

#include <json.hpp>

#include "bargmann/applications.hpp"
#include "bargmann/fock.hpp"
#include "bargmann/interferometer.hpp"
#include "bargmann/protocol.hpp"

namespace bargmann {

using json = nlohmann::ordered_json;

json complex_to_json(const cplx& z);
cplx complex_from_json(const json& j);
std::vector<cplx> complex_vector_from_json(const json& j);

// Pure states: {"layout": {"M":, "d":}, "amplitudes": [{"occupations": [...],
// "re":, "im":}, ...]}. Mixtures: {"components": [{"weight":, "state": ...}]}.
json pure_state_to_json(const PureState& psi);
PureState pure_state_from_json(const json& j);
json mixed_state_to_json(const MixedState& rho);
MixedState mixed_state_from_json(const json& j);

// Row-major [re, im] pair array plus dimension.
json mode_unitary_to_json(const ModeUnitary& U);
ModeUnitary mode_unitary_from_json(const json& j);

json invariant_estimate_to_json(const InvariantEstimate& est);
json spectrum_report_to_json(const SpectrumReport& report);

/// State specification for configs: inline pure/mixed schema as above, or a
/// constructor form {"kind": "single_photon" | "dual_rail" | "coherent" |
/// "fock", ...params}, or {"kind": "mixed", "components": [...]}.
PureState parse_pure_state_spec(const json& spec);
MixedState parse_state_spec(const json& spec);

/// FNV-1a 64-bit over a string; stable across platforms.
std::uint64_t fnv1a64(const std::string& data);

}  // namespace bargmann
