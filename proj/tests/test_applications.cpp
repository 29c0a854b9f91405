#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "bargmann/applications.hpp"
#include "bargmann/oracle.hpp"
#include "test_support.hpp"

using namespace bargmann;
using test_support::random_mixed_state;
using test_support::random_single_photon_mixed;

namespace {

const EstimationMode kExact = EstimationMode::exact();

MixedState orthogonal_mixture(const std::vector<double>& weights) {
    const int d = static_cast<int>(weights.size());
    std::vector<MixedComponent> comps;
    for (int i = 0; i < d; ++i) {
        std::vector<cplx> amp(d, cplx{0, 0});
        amp[i] = 1.0;
        comps.push_back({weights[i], single_photon_state(amp)});
    }
    return MixedState(std::move(comps));
}

}  // namespace

TEST_CASE("hom_overlap: identical, orthogonal, coherent") {
    const auto psi = MixedState::from_pure(dual_rail_qubit(0.9, 1.3));
    CHECK(hom_overlap(psi, psi, kExact) == doctest::Approx(1.0).epsilon(1e-10));

    const auto h = MixedState::from_pure(single_photon_state({{1, 0}, {0, 0}}));
    const auto v = MixedState::from_pure(single_photon_state({{0, 0}, {1, 0}}));
    CHECK(std::abs(hom_overlap(h, v, kExact)) < 1e-10);

    const auto coh =
        MixedState::from_pure(truncated_coherent_state({{0.8, 0.3}}, 16).state);
    CHECK(hom_overlap(coh, coh, kExact) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("hom_overlap: symmetric, equals the oracle, clipped when sampled") {
    std::mt19937 gen(3);
    for (int rep = 0; rep < 6; ++rep) {
        const auto a = random_mixed_state(ModeLayout{1, 2}, 1, 2, gen);
        const auto b = random_mixed_state(ModeLayout{1, 2}, 1, 2, gen);
        const double ab = hom_overlap(a, b, kExact);
        const double ba = hom_overlap(b, a, kExact);
        CHECK(std::abs(ab - ba) < 1e-10);
        const double truth = oracle::direct_multivariate_trace({a, b}).real();
        CHECK(ab == doctest::Approx(truth).epsilon(1e-8));
    }

    const auto psi = MixedState::from_pure(dual_rail_qubit(0.4, 0.0));
    const auto mode = EstimationMode::sampled_with_bound(0.05, 0.05, 11);
    const double clipped = hom_overlap(psi, psi, mode);
    CHECK(clipped <= 1.0 + 2 * 0.05);
    CHECK(clipped >= -2 * 0.05);
}

TEST_CASE("renyi_entropy: pure, maximally mixed, and weighted mixtures") {
    const auto pure = MixedState::from_pure(dual_rail_qubit(0.3, 0.7));
    CHECK(std::abs(renyi_entropy(pure, 2, kExact)) < 1e-10);

    const auto half = orthogonal_mixture({0.5, 0.5});
    CHECK(renyi_entropy(half, 2, kExact) == doctest::Approx(std::log(2.0)).epsilon(1e-10));

    const auto skew = orthogonal_mixture({0.75, 0.25});
    const double expected = -std::log(0.75 * 0.75 * 0.75 + 0.25 * 0.25 * 0.25) / 2.0;
    CHECK(renyi_entropy(skew, 3, kExact) == doctest::Approx(expected).epsilon(1e-10));

    CHECK_THROWS_AS(renyi_entropy(pure, 1, kExact), std::invalid_argument);
}

TEST_CASE("renyi_entropy: order monotonicity H2 >= H3") {
    std::mt19937 gen(7);
    for (int rep = 0; rep < 6; ++rep) {
        const auto rho = random_mixed_state(ModeLayout{1, 2}, 1, 2, gen);
        CHECK(renyi_entropy(rho, 2, kExact) >= renyi_entropy(rho, 3, kExact) - 1e-10);
    }
}

TEST_CASE("spectrum_from_traces: orthogonal mixtures and pure states") {
    const auto half = spectrum_from_traces(orthogonal_mixture({0.5, 0.5}), 2, kExact);
    CHECK(half.eigenvalues[0].real() == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(half.eigenvalues[1].real() == doctest::Approx(0.5).epsilon(1e-8));

    const auto skew = spectrum_from_traces(orthogonal_mixture({0.75, 0.25}), 2, kExact);
    // char poly lambda^2 - lambda + 0.1875
    CHECK(skew.char_poly_coeffs[0] == doctest::Approx(1.0));
    CHECK(skew.char_poly_coeffs[1] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(skew.char_poly_coeffs[2] == doctest::Approx(0.1875).epsilon(1e-8));
    CHECK(skew.power_traces[1] == doctest::Approx(0.625).epsilon(1e-10));
    CHECK(skew.eigenvalues[0].real() == doctest::Approx(0.75).epsilon(1e-7));
    CHECK(skew.eigenvalues[1].real() == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(skew.largest_eigenvalue == doctest::Approx(0.75).epsilon(1e-7));
    CHECK(skew.anomalies.empty());

    const auto pure =
        spectrum_from_traces(MixedState::from_pure(dual_rail_qubit(1.1, 0.0)), 3, kExact);
    CHECK(pure.eigenvalues[0].real() == doctest::Approx(1.0).epsilon(1e-7));
    for (int i = 1; i < 3; ++i)
        CHECK(std::abs(pure.eigenvalues[i]) < 1e-6);

    const auto three =
        spectrum_from_traces(orthogonal_mixture({0.5, 0.3, 0.2}), 3, kExact);
    CHECK(three.eigenvalues[0].real() == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(three.eigenvalues[1].real() == doctest::Approx(0.3).epsilon(1e-7));
    CHECK(three.eigenvalues[2].real() == doctest::Approx(0.2).epsilon(1e-7));
}

TEST_CASE("spectrum_from_traces: noisy traces are flagged, not clipped") {
    auto report = spectrum_from_power_traces({1.0, 1.3});  // impossible purity
    CHECK_FALSE(report.anomalies.empty());
    bool out_of_range = false;
    for (const auto& a : report.anomalies)
        if (a.find("outside") != std::string::npos) out_of_range = true;
    CHECK(out_of_range);
}

TEST_CASE("kernel_matrix: identical, orthogonal, and angled encodings") {
    const auto psi = MixedState::from_pure(dual_rail_qubit(0.5, 0.1));
    const auto ones = kernel_matrix({psi, psi, psi}, kExact);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(ones.K(i, j) == doctest::Approx(1.0).epsilon(1e-8));

    const auto h = MixedState::from_pure(single_photon_state({{1, 0}, {0, 0}}));
    const auto v = MixedState::from_pure(single_photon_state({{0, 0}, {1, 0}}));
    const auto eye = kernel_matrix({h, v}, kExact);
    CHECK(eye.K(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(eye.K(1, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(eye.K(0, 1)) < 1e-10);

    const double t = 0.6;
    const auto angled = MixedState::from_pure(
        single_photon_state({{std::cos(t), 0}, {std::sin(t), 0}}));
    const auto pair = kernel_matrix({h, angled}, kExact);
    CHECK(pair.K(0, 1) == doctest::Approx(std::cos(t) * std::cos(t)).epsilon(1e-10));
}

TEST_CASE("kernel_matrix: symmetric PSD with independent pair streams") {
    std::mt19937 gen(11);
    std::vector<MixedState> encodings;
    for (int i = 0; i < 4; ++i) encodings.push_back(random_single_photon_mixed(2, 1, gen));

    const auto exact = kernel_matrix(encodings, kExact);
    CHECK((exact.K - exact.K.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(exact.K);
    CHECK(eig.eigenvalues().minCoeff() > -1e-8);

    const auto sampled = kernel_matrix(encodings, EstimationMode::sampled(2000, 17));
    CHECK(sampled.pair_seeds.size() == 6);
    std::set<std::uint64_t> distinct;
    for (const auto& [i, j, s] : sampled.pair_seeds) distinct.insert(s);
    CHECK(distinct.size() == 6);
    for (int i = 0; i < 4; ++i)
        CHECK(sampled.K(i, i) == doctest::Approx(exact.K(i, i)).epsilon(1e-10));
}

TEST_CASE("classifier_eval: margins and the sign(0) tie-break") {
    CHECK(classifier_eval({0.4, 0.2}, {0.0, 0.0}, {1, -1}, 0.5) == 1);
    CHECK(classifier_eval({0.9}, {2.0}, {1}, -0.5) == 1);
    CHECK(classifier_eval({0.9}, {2.0}, {-1}, 0.5) == -1);
    CHECK(classifier_eval({0.5, 0.5}, {1.0, 1.0}, {1, -1}, 0.0) == 1);  // exact tie
    CHECK_THROWS_AS(classifier_eval({0.5}, {1.0}, {2}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(classifier_eval({0.5}, {1.0, 2.0}, {1}, 0.0), std::invalid_argument);
}

TEST_CASE("husimi_q: vacuum and single-photon spot values") {
    const auto vac = MixedState::from_pure(vacuum_state(ModeLayout{1, 1}));
    CHECK(husimi_q(vac, {cplx{0, 0}}, 4, kExact) ==
          doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-10));
    CHECK(husimi_q(vac, {cplx{1, 0}}, 25, kExact) ==
          doctest::Approx(std::exp(-1.0) / std::numbers::pi).epsilon(1e-9));

    const auto one = MixedState::from_pure(basis_state(ModeLayout{1, 1}, {1}));
    CHECK(std::abs(husimi_q(one, {cplx{0, 0}}, 4, kExact)) < 1e-12);

    CHECK_THROWS_AS(husimi_q(vac, {cplx{3, 0}}, 2, kExact), truncation_error);
}

TEST_CASE("husimi_q: grid mass approximates 1 for the vacuum") {
    const auto vac = MixedState::from_pure(vacuum_state(ModeLayout{1, 1}));
    const double step = 0.1;
    double total = 0.0;
    for (double re = -3.0; re <= 3.0 + step / 2; re += step) {
        for (double im = -3.0; im <= 3.0 + step / 2; im += step) {
            const cplx alpha{re, im};
            const int cutoff = suggest_coherent_cutoff({alpha}, 1e-9);
            total += husimi_q(vac, {alpha}, cutoff, kExact) * step * step;
        }
    }
    CHECK(total == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("kirkwood_dirac: coinciding, projective, and orthogonal cases") {
    std::mt19937 gen(13);
    const auto a = test_support::random_pure_state(ModeLayout{1, 2}, 1, gen);
    const auto b = test_support::random_pure_state(ModeLayout{1, 2}, 1, gen);
    const auto rho = random_mixed_state(ModeLayout{1, 2}, 1, 2, gen);

    // a = b: value reduces to <a|rho|a>, real and nonnegative
    const cplx diag = kirkwood_dirac(rho, a, a, kExact);
    CHECK(std::abs(diag.imag()) < 1e-10);
    CHECK(diag.real() >= -1e-10);

    // rho = |a><a|: value is |<a|b>|^2
    const cplx proj = kirkwood_dirac(MixedState::from_pure(a), a, b, kExact);
    CHECK(std::abs(proj - cplx{std::norm(inner_product(a, b)), 0.0}) < 1e-8);

    // orthogonal bases, rho an even mixture of both: <b|a> = 0 kills it
    const auto h = single_photon_state({{1, 0}, {0, 0}});
    const auto v = single_photon_state({{0, 0}, {1, 0}});
    const MixedState even(std::vector<MixedComponent>{{0.5, h}, {0.5, v}});
    CHECK(std::abs(kirkwood_dirac(even, h, v, kExact)) < 1e-10);

    // generic case against the Gram-chain oracle
    const cplx got = kirkwood_dirac(rho, a, b, kExact);
    const cplx truth = oracle::direct_multivariate_trace(
        {MixedState::from_pure(a), rho, MixedState::from_pure(b)});
    CHECK(std::abs(got - truth) < 1e-8);
}

TEST_CASE("positive_p: coherent projections and the oracle") {
    const auto vac = MixedState::from_pure(vacuum_state(ModeLayout{1, 1}));
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(std::abs(positive_p(vac, {cplx{0, 0}}, {cplx{0, 0}}, 4, kExact) -
                   cplx{1.0 / pi2, 0.0}) < 1e-10);

    const auto coh = truncated_coherent_state({cplx{0.6, -0.2}}, 20).state;
    const auto rho_coh = MixedState::from_pure(coh);
    CHECK(std::abs(positive_p(rho_coh, {cplx{0.6, -0.2}}, {cplx{0.6, -0.2}}, 20, kExact) -
                   cplx{1.0 / pi2, 0.0}) < 1e-7);

    std::mt19937 gen(17);
    const auto rho = random_mixed_state(ModeLayout{1, 1}, 2, 2, gen);
    const std::vector<cplx> a{cplx{0.5, 0.1}}, b{cplx{-0.3, 0.4}};
    const cplx got = positive_p(rho, a, b, 20, kExact);
    const auto ca = truncated_coherent_state(a, 20).state;
    const auto cb = truncated_coherent_state(b, 20).state;
    const cplx truth = oracle::direct_multivariate_trace(
                           {MixedState::from_pure(ca), rho, MixedState::from_pure(cb)}) /
                       pi2;
    CHECK(std::abs(got - truth) < 1e-8);
}

TEST_CASE("displaced_fock_state: exact at alpha = 0 and orthonormal in general") {
    const auto plain = displaced_fock_state(cplx{0, 0}, 3, 5);
    CHECK(plain.tail_mass < 1e-12);
    CHECK(std::abs(plain.state.amps.at({3}) - cplx{1.0, 0.0}) < 1e-12);
    CHECK(plain.state.amps.size() == 1);

    const cplx alpha{0.7, -0.4};
    const auto d0 = displaced_fock_state(alpha, 0, 25);
    const auto d1 = displaced_fock_state(alpha, 1, 25);
    const auto d2 = displaced_fock_state(alpha, 2, 25);
    CHECK(d1.tail_mass < 1e-9);
    CHECK(std::abs(inner_product(d0.state, d1.state)) < 1e-8);
    CHECK(std::abs(inner_product(d0.state, d2.state)) < 1e-8);
    CHECK(std::abs(inner_product(d1.state, d2.state)) < 1e-8);

    // d0 is just the coherent state
    const auto coh = truncated_coherent_state({alpha}, 25).state;
    CHECK(std::abs(inner_product(d0.state, coh) - cplx{1.0, 0.0}) < 1e-10);
}

TEST_CASE("wigner_point: vacuum and single photon at the origin") {
    const auto vac = MixedState::from_pure(vacuum_state(ModeLayout{1, 1}));
    CHECK(wigner_point(vac, {cplx{0, 0}}, -1, 4, kExact) ==
          doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-10));

    const auto one = MixedState::from_pure(basis_state(ModeLayout{1, 1}, {1}));
    CHECK(wigner_point(one, {cplx{0, 0}}, -1, 4, kExact) ==
          doctest::Approx(-2.0 / std::numbers::pi).epsilon(1e-10));

    // raising n_max above the support changes nothing
    const double w1 = wigner_point(one, {cplx{0, 0}}, 1, 6, kExact);
    const double w2 = wigner_point(one, {cplx{0, 0}}, 5, 6, kExact);
    CHECK(std::abs(w1 - w2) < 1e-12);
}

TEST_CASE("wigner_point: displaced evaluation and the convergence guard") {
    // coherent state: W(alpha) = (2/pi) exp(-2|alpha - beta|^2)
    const cplx beta{0.4, 0.2};
    const auto rho = MixedState::from_pure(truncated_coherent_state({beta}, 20).state);
    const cplx at{0.1, -0.3};
    const double expected =
        2.0 / std::numbers::pi * std::exp(-2.0 * std::norm(at - beta));
    const double got = wigner_point(rho, {at}, 25, 25, kExact);
    CHECK(got == doctest::Approx(expected).epsilon(1e-6));

    // a too-short series must refuse rather than return garbage
    CHECK_THROWS_AS(wigner_point(rho, {cplx{2.0, 0.0}}, 0, 25, kExact, 1e-6),
                    truncation_error);

    const auto dual = MixedState::from_pure(dual_rail_qubit(0.3, 0.0));
    CHECK_THROWS_AS(wigner_point(dual, {cplx{0, 0}, cplx{0, 0}}, 1, 4, kExact),
                    std::invalid_argument);
}
