#include "bargmann/serialization.hpp"

#include <stdexcept>

namespace bargmann {

json complex_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("complex value must be a [re, im] pair");
    return cplx{j[0].get<double>(), j[1].get<double>()};
}

std::vector<cplx> complex_vector_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected an array of [re, im] pairs");
    std::vector<cplx> out;
    out.reserve(j.size());
    for (const auto& item : j) out.push_back(complex_from_json(item));
    return out;
}

json pure_state_to_json(const PureState& psi) {
    json amps = json::array();
    for (const auto& [key, amp] : psi.amps) {
        amps.push_back(json{{"occupations", key},
                            {"re", amp.real()},
                            {"im", amp.imag()}});
    }
    return json{{"layout", {{"M", psi.layout.num_systems}, {"d", psi.layout.num_internal}}},
                {"amplitudes", std::move(amps)}};
}

PureState pure_state_from_json(const json& j) {
    PureState psi;
    const auto& layout = j.at("layout");
    psi.layout = ModeLayout{layout.at("M").get<int>(), layout.at("d").get<int>()};
    if (psi.layout.num_systems < 1 || psi.layout.num_internal < 1)
        throw std::invalid_argument("pure state layout must have M >= 1, d >= 1");
    for (const auto& entry : j.at("amplitudes")) {
        Occupation key = entry.at("occupations").get<Occupation>();
        if (static_cast<int>(key.size()) != psi.layout.total_modes())
            throw std::invalid_argument("occupation length != M*d");
        for (int n : key)
            if (n < 0) throw std::invalid_argument("negative occupation");
        psi.amps[std::move(key)] =
            cplx{entry.at("re").get<double>(), entry.at("im").get<double>()};
    }
    if (psi.amps.empty()) throw std::invalid_argument("pure state with no amplitudes");
    psi.normalize();
    return psi;
}

json mixed_state_to_json(const MixedState& rho) {
    json comps = json::array();
    for (const auto& c : rho.components)
        comps.push_back(json{{"weight", c.weight}, {"state", pure_state_to_json(c.state)}});
    return json{{"components", std::move(comps)}};
}

MixedState mixed_state_from_json(const json& j) {
    std::vector<MixedComponent> comps;
    for (const auto& entry : j.at("components"))
        comps.push_back({entry.at("weight").get<double>(),
                         pure_state_from_json(entry.at("state"))});
    return MixedState(std::move(comps));
}

json mode_unitary_to_json(const ModeUnitary& U) {
    const int M = U.dimension();
    json entries = json::array();
    for (int r = 0; r < M; ++r)
        for (int c = 0; c < M; ++c) entries.push_back(complex_to_json(U.entries()(r, c)));
    return json{{"dimension", M}, {"entries", std::move(entries)}};
}

ModeUnitary mode_unitary_from_json(const json& j) {
    const int M = j.at("dimension").get<int>();
    const auto& entries = j.at("entries");
    if (!entries.is_array() || static_cast<int>(entries.size()) != M * M)
        throw std::invalid_argument("mode unitary entries must hold M*M [re, im] pairs");
    Eigen::MatrixXcd mat(M, M);
    for (int r = 0; r < M; ++r)
        for (int c = 0; c < M; ++c) mat(r, c) = complex_from_json(entries[r * M + c]);
    return ModeUnitary(std::move(mat));
}

json invariant_estimate_to_json(const InvariantEstimate& est) {
    json X = json::array();
    for (const auto& x : est.X) X.push_back(complex_to_json(x));
    return json{{"M", est.num_states},
                {"d", est.num_internal},
                {"mode", est.mode.is_exact() ? "exact" : "sampled"},
                {"N", est.mode.num_samples},
                {"seed", est.mode.seed},
                {"P", est.P},
                {"X", std::move(X)},
                {"delta", complex_to_json(est.delta)},
                {"epsilon", est.mode.epsilon.value_or(0.0)},
                {"delta_fail", est.mode.delta_fail.value_or(0.0)},
                {"stderr", est.bin_stderr}};
}

json spectrum_report_to_json(const SpectrumReport& report) {
    json eigs = json::array();
    for (const auto& ev : report.eigenvalues) eigs.push_back(complex_to_json(ev));
    return json{{"power_traces", report.power_traces},
                {"char_poly_coeffs", report.char_poly_coeffs},
                {"eigenvalues", std::move(eigs)},
                {"largest_eigenvalue", report.largest_eigenvalue},
                {"anomalies", report.anomalies}};
}

PureState parse_pure_state_spec(const json& spec) {
    if (!spec.is_object()) throw std::invalid_argument("state spec must be an object");
    if (!spec.contains("kind")) return pure_state_from_json(spec);

    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "single_photon")
        return single_photon_state(complex_vector_from_json(spec.at("amplitudes")));
    if (kind == "dual_rail")
        return dual_rail_qubit(spec.at("theta").get<double>(),
                               spec.value("phi", 0.0));
    if (kind == "coherent") {
        const auto beta = complex_vector_from_json(spec.at("beta"));
        std::optional<double> tol;
        if (spec.contains("tail_tolerance")) tol = spec.at("tail_tolerance").get<double>();
        const int cutoff = spec.contains("cutoff")
                               ? spec.at("cutoff").get<int>()
                               : suggest_coherent_cutoff(beta, 1e-8);
        return truncated_coherent_state(beta, cutoff, tol).state;
    }
    if (kind == "fock") {
        Occupation occ = spec.at("occupations").get<Occupation>();
        const int d = static_cast<int>(occ.size());
        return basis_state(ModeLayout{1, d}, std::move(occ));
    }
    throw std::invalid_argument("unknown pure state kind: " + kind);
}

MixedState parse_state_spec(const json& spec) {
    if (!spec.is_object()) throw std::invalid_argument("state spec must be an object");
    if (spec.contains("kind") && spec.at("kind").get<std::string>() == "mixed") {
        std::vector<MixedComponent> comps;
        for (const auto& entry : spec.at("components"))
            comps.push_back({entry.at("weight").get<double>(),
                             parse_pure_state_spec(entry.at("state"))});
        return MixedState(std::move(comps));
    }
    if (!spec.contains("kind") && spec.contains("components"))
        return mixed_state_from_json(spec);
    return MixedState::from_pure(parse_pure_state_spec(spec));
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char byte : data) {
        hash ^= byte;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

}  // namespace bargmann
