#include "jointphase/errors.hpp"
#include "jointphase/interferometry.hpp"

#include <doctest.h>

#include <cmath>

using namespace jointphase;

TEST_CASE("qubit readout: frozen simulation and formula") {
    // g = 1, delta = 0.5, gamma = 0.05; references from 40-digit arithmetic.
    const RamseyOutcome r = ramsey_pg(JCParams{1.0, 0.5, 0.05, 0.0, 0});
    CHECK(r.protocol == RamseyProtocol::QubitPg);
    CHECK(r.p_detect == doctest::Approx(0.15259289886316145).epsilon(1e-10));
    CHECK(r.p_formula == doctest::Approx(0.15289787690193393).epsilon(1e-12));
    CHECK(r.u == doctest::Approx(0.95966156917275546).epsilon(1e-14));
    CHECK(r.xi == doctest::Approx(std::sqrt(1.0 - r.u * r.u - r.v * r.v) / std::sqrt(2.0)));
    CHECK(std::abs(r.sector_population_sum - 1.0) < 1e-8);
}

TEST_CASE("decay-free readout is the bare fringe") {
    const RamseyOutcome r = ramsey_pg(JCParams{1.0, 0.7, 0.0, 0.0, 0});
    CHECK(r.u == 1.0);
    CHECK(r.v == 0.0);
    CHECK(r.p_detect == doctest::Approx(0.5 * (1.0 + std::cos(r.beta_reference))).epsilon(1e-12));
    CHECK(r.p_formula == doctest::Approx(r.p_detect).epsilon(1e-12));
    CHECK(std::abs(r.beta_recovered - std::abs(r.beta_reference)) < 1e-6);
}

TEST_CASE("resonant readout sits below one half") {
    const RamseyOutcome r = ramsey_pg(JCParams{1.0, 0.0, 0.1, 0.0, 0});
    CHECK(std::abs(r.beta_reference) == doctest::Approx(kPi));
    CHECK(r.p_formula == doctest::Approx(0.5 * (1.0 - r.u)));
    CHECK(r.p_detect < 0.5);
}

TEST_CASE("multi-channel readout") {
    const JCParams p{1.0, 1.0, 0.1, 0.0, 0};
    const RamseyOutcome single = ramsey_pg(p);
    const RamseyOutcome same = ramsey_pg_multichannel(p, p.gamma);
    CHECK(same.p_detect == single.p_detect);
    CHECK(same.p_formula == single.p_formula);

    const RamseyOutcome half = ramsey_pg_multichannel(p, 0.05);
    CHECK(half.protocol == RamseyProtocol::MultiChannelPg);
    CHECK(std::abs(half.sector_population_sum - 1.0) < 1e-8);
    CHECK(std::abs(half.p_formula - half.p_detect) < 5e-3);
    // Losing decay into |g> lowers the background.
    CHECK(half.p_detect < single.p_detect);

    const RamseyOutcome none = ramsey_pg_multichannel(JCParams{1.0, 1.0, 0.0, 0.0, 0}, 0.0);
    CHECK(none.p_detect == doctest::Approx(0.5 * (1.0 + std::cos(none.beta_reference))));
    CHECK_THROWS(ramsey_pg_multichannel(p, 0.2));
}

TEST_CASE("Fock readout") {
    const JCParams p{1.0, 0.5, 0.08, 0.03, 1};
    const RamseyOutcome r = ramsey_pf_fock(p);
    CHECK(r.protocol == RamseyProtocol::FockPf);
    CHECK(r.p_detect == doctest::Approx(0.09894058955053275).epsilon(1e-10));
    CHECK(std::abs(r.p_formula - r.p_detect) < 5e-3);
    CHECK(r.p_n * r.p_n + r.q_n * r.q_n + r.s_n * r.s_n == doctest::Approx(1.0));
    CHECK(std::abs(r.sector_population_sum - 1.0) < 1e-8);

    const RamseyOutcome sym = ramsey_pf_fock(JCParams{1.0, 0.5, 0.05, 0.05, 2});
    CHECK(sym.v == 0.0);

    const RamseyOutcome bare = ramsey_pf_fock(JCParams{1.0, 0.5, 0.0, 0.0, 0});
    CHECK(bare.q_n == 0.0);
    CHECK(bare.s_n == 0.0);
    CHECK(bare.p_detect == doctest::Approx(0.5 * (1.0 + std::cos(bare.beta_reference))).epsilon(1e-12));
}

TEST_CASE("guards and collapse") {
    CHECK_THROWS_AS(ramsey_pf_fock(JCParams{1.0, 0.5, 0.5, 0.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(ramsey_pf_fock(JCParams{1.0, 0.5, 0.0, 0.3, 1}), std::invalid_argument);
    CHECK_THROWS(ramsey_pg(JCParams{1.0, 0.5, 0.05, 0.01, 0}));
    // With the guard disabled a strongly damped cycle drives u through zero.
    CHECK_THROWS_AS(ramsey_pg(JCParams{1.0, 0.0, 3.0, 0.0, 0}, 1e9), NumericalError);
}

TEST_CASE("quantum-jump dynamical contamination") {
    CHECK(previous_method_dynamical_contamination(JCParams{1.0, 0.0, 0.1, 0.0, 0}).value == 0.0);
    CHECK(previous_method_dynamical_contamination(JCParams{1.0, 0.5, 0.1, 0.1, 2}).value == 0.0);
    const JCParams p{1.0, 0.5, 0.1, 0.0, 0};
    const double omega = p.rabi_frequency();
    CHECK(previous_method_dynamical_contamination(p).value ==
          doctest::Approx(-kPi * kPi * 0.5 * 0.1 / (8.0 * std::pow(omega, 4))));
}
