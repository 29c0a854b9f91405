#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bargmann/serialization.hpp"
#include "test_support.hpp"

using namespace bargmann;
using test_support::random_mixed_state;
using test_support::random_pure_state;
using test_support::random_unitary;

namespace {

bool states_close(const PureState& a, const PureState& b, double tol = 1e-12) {
    if (!(a.layout == b.layout) || a.amps.size() != b.amps.size()) return false;
    for (const auto& [k, v] : a.amps) {
        const auto it = b.amps.find(k);
        if (it == b.amps.end() || std::abs(v - it->second) > tol) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("pure state round trip through the documented schema") {
    std::mt19937 gen(3);
    for (int rep = 0; rep < 10; ++rep) {
        const auto psi = random_pure_state(ModeLayout{2, 2}, 2, gen);
        const auto back = pure_state_from_json(pure_state_to_json(psi));
        CHECK(states_close(psi, back));
    }

    const json j = pure_state_to_json(dual_rail_qubit(0.7, 0.3));
    CHECK(j.at("layout").at("M") == 1);
    CHECK(j.at("layout").at("d") == 2);
    CHECK(j.at("amplitudes").size() == 2);
    CHECK(j.at("amplitudes")[0].contains("occupations"));
    CHECK(j.at("amplitudes")[0].contains("re"));
    CHECK(j.at("amplitudes")[0].contains("im"));
}

TEST_CASE("mixed state round trip") {
    std::mt19937 gen(5);
    const auto rho = random_mixed_state(ModeLayout{1, 3}, 2, 3, gen);
    const auto back = mixed_state_from_json(mixed_state_to_json(rho));
    REQUIRE(back.components.size() == rho.components.size());
    for (std::size_t i = 0; i < rho.components.size(); ++i) {
        CHECK(back.components[i].weight ==
              doctest::Approx(rho.components[i].weight).epsilon(1e-12));
        CHECK(states_close(rho.components[i].state, back.components[i].state));
    }
}

TEST_CASE("deserialized pure states are normalized") {
    const json j{{"layout", {{"M", 1}, {"d", 1}}},
                 {"amplitudes", json::array({json{{"occupations", {0}}, {"re", 3.0}, {"im", 0.0}},
                                             json{{"occupations", {1}}, {"re", 4.0}, {"im", 0.0}}})}};
    const auto psi = pure_state_from_json(j);
    CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(psi.amps.at({0}) - cplx{0.6, 0.0}) < 1e-12);

    json bad = j;
    bad["amplitudes"][0]["occupations"] = {0, 0};
    CHECK_THROWS_AS(pure_state_from_json(bad), std::invalid_argument);
}

TEST_CASE("mode unitary round trip as row-major [re, im] pairs") {
    std::mt19937 gen(7);
    const ModeUnitary U(random_unitary(3, gen));
    const auto j = mode_unitary_to_json(U);
    CHECK(j.at("dimension") == 3);
    CHECK(j.at("entries").size() == 9);
    const auto back = mode_unitary_from_json(j);
    CHECK((back.entries() - U.entries()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("state specs: constructor kinds") {
    const auto sp = parse_state_spec(json{{"kind", "single_photon"},
                                          {"amplitudes", {{1.0, 0.0}, {0.0, 1.0}}}});
    CHECK(sp.components.size() == 1);
    CHECK(sp.layout().num_internal == 2);

    const auto dr = parse_pure_state_spec(json{{"kind", "dual_rail"}, {"theta", 1.0}});
    CHECK(states_close(dr, dual_rail_qubit(1.0, 0.0)));

    const auto coh = parse_pure_state_spec(
        json{{"kind", "coherent"}, {"beta", {{0.5, 0.0}}}, {"cutoff", 12}});
    CHECK(std::abs(coh.norm_squared() - 1.0) < 1e-10);

    const auto fock = parse_pure_state_spec(json{{"kind", "fock"}, {"occupations", {0, 2}}});
    CHECK(fock.amps.count({0, 2}) == 1);

    const auto mix = parse_state_spec(
        json{{"kind", "mixed"},
             {"components",
              json::array({json{{"weight", 0.25},
                                {"state", json{{"kind", "dual_rail"}, {"theta", 0.0}}}},
                           json{{"weight", 0.75},
                                {"state", json{{"kind", "dual_rail"}, {"theta", 3.14159}}}}})}});
    CHECK(mix.components.size() == 2);

    CHECK_THROWS_AS(parse_pure_state_spec(json{{"kind", "squeezed"}}),
                    std::invalid_argument);
}

TEST_CASE("invariant estimate JSON carries the documented fields") {
    const auto psi = MixedState::from_pure(dual_rail_qubit(0.4, 0.1));
    const auto est = estimate_multivariate_trace(
        {psi, psi, psi}, EstimationMode::sampled_with_bound(0.1, 0.05, 42));
    const auto j = invariant_estimate_to_json(est);
    CHECK(j.at("M") == 3);
    CHECK(j.at("d") == 2);
    CHECK(j.at("mode") == "sampled");
    CHECK(j.at("N") == 185);
    CHECK(j.at("seed") == 42);
    CHECK(j.at("P").size() == 3);
    CHECK(j.at("X").size() == 3);
    CHECK(j.at("delta").size() == 2);
    CHECK(j.at("epsilon") == doctest::Approx(0.1));
    CHECK(j.at("delta_fail") == doctest::Approx(0.05));
    CHECK(j.at("stderr").size() == 3);
}

TEST_CASE("fnv1a64 is stable") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") != fnv1a64("b"));
    CHECK(fnv1a64("config") == fnv1a64("config"));
}
