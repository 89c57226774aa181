#include "jointphase/bath.hpp"
#include "jointphase/validation.hpp"

#include <doctest.h>

#include <cmath>

using namespace jointphase;

TEST_CASE("flat bath grid and couplings") {
    const BathSpec b = build_flat_bath(1.0, 40.0, 801);
    CHECK(b.mode_count() == 801);
    CHECK(b.detunings.front() == doctest::Approx(-20.0));
    CHECK(b.detunings.back() == doctest::Approx(20.0));
    CHECK(b.detunings[400] == 0.0);
    CHECK(b.spacing == doctest::Approx(0.05));
    CHECK(b.t_max == doctest::Approx(2.0 * kPi / 0.05));
    // Fermi golden rule: 2 pi g^2 / dw = gamma.
    CHECK(2.0 * kPi * b.couplings[0] * b.couplings[0] / b.spacing == doctest::Approx(1.0));
    CHECK(b.with_rate(0.25).couplings[3] == doctest::Approx(0.5 * b.couplings[3]));

    CHECK(build_flat_bath(0.0, 40.0, 801).couplings[0] == 0.0);
    CHECK_THROWS(build_flat_bath(1.0, 40.0, 200));
    CHECK_THROWS(build_flat_bath(1.0, 40.0, 199));
    CHECK_THROWS(build_flat_bath(1.0, 10.0, 801));
    CHECK_THROWS(build_flat_bath(-1.0, 40.0, 801));
}

TEST_CASE("arrow Hamiltonian: matrix-free apply equals the dense matrix") {
    const BathSpec b = build_flat_bath(0.5, 20.0, 201);
    const JointSystem sys = joint_jc(JCParams{1.0, 0.3, 0.5, 0.2, 0}, b.with_rate(0.5), b.with_rate(0.2));
    CHECK(sys.hamiltonian.dimension() == 2 * 201 + 2);
    const CMatrix dense = sys.hamiltonian.to_dense();
    CHECK((dense - dense.adjoint()).norm() == 0.0);
    const CVector x = CVector::Random(static_cast<Eigen::Index>(sys.hamiltonian.dimension()));
    CVector y;
    sys.hamiltonian.apply(x, y);
    CHECK((y - dense * x).norm() < 1e-12);
    CHECK(sys.basis->label(2) == "g,0;a[0]");
    CHECK(sys.basis->label(2 + 201) == "g,0;p[0]");
}

TEST_CASE("joint evolution is unitary and conserves excitations") {
    const auto p = DispersiveQubitParams::cyclic_for(1.0, 1.0, kPi / 2);
    const JointSystem sys = joint_dispersive(p, build_flat_bath(1.0, 40.0, 401));
    const JointTrajectory traj = evolve_joint(sys, 2.0, oracle_step(40.0));
    for (const auto& s : traj.path.states) CHECK(std::abs(s.norm_squared() - 1.0) < 1e-9);
    // |g;vac> carries no excitation and only rotates.
    const Complex g0 = traj.path.initial()[1];
    CHECK(std::abs(traj.path.final_state()[1]) == doctest::Approx(std::abs(g0)).epsilon(1e-12));
}

TEST_CASE("no-excitation block tracks the conditional dynamics") {
    const auto p = DispersiveQubitParams::cyclic_for(1.0, 0.5, kPi / 3);
    const JointSystem sys = joint_dispersive(p, build_flat_bath(0.5, 80.0, 1601));
    const JointTrajectory traj = evolve_joint(sys, 3.0, oracle_step(80.0), {50});
    const StateVector block = project_no_excitation(traj.at(traj.path.size() - 1));
    CHECK(block.dimension() == 2);
    const StateVector ref = dispersive_state(p, traj.path.times.back());
    CHECK(std::abs(block[0] - ref[0]) / std::abs(ref[0]) < 0.01);
    CHECK(std::abs(block[1] - ref[1]) < 1e-12);
}

TEST_CASE("joint phase report") {
    const auto p = DispersiveQubitParams::cyclic_for(1.0, 1.0, kPi / 3);
    const JointSystem sys = joint_dispersive(p, build_flat_bath(1.0, 40.0, 801));
    const JointTrajectory traj = evolve_joint(sys, p.T, oracle_step(40.0), {20});
    const JointPhaseReport r = joint_phase_report(traj, sys.hamiltonian);
    CHECK(r.independence_gap < 1e-12);
    // The joint energy equals <H_s> for a vacuum reservoir.
    CHECK(r.report.dynamical_phase == doctest::Approx(-0.5 * std::cos(kPi / 3) * p.T).epsilon(1e-12));
    CHECK(std::abs(wrap_phase(r.report.beta_principal + kPi * (1.0 - std::cos(kPi / 3)))) < 0.01);
}

TEST_CASE("oracle guards") {
    const auto p = DispersiveQubitParams::cyclic_for(1.0, 1.0, kPi / 2);
    const JointSystem sys = joint_dispersive(p, build_flat_bath(1.0, 40.0, 201));
    CHECK_THROWS(evolve_joint(sys, sys.t_max, 0.01));  // recurrence
    CHECK_THROWS(joint_jc(JCParams{1.0, 0.0, 0.1, 0.0, 1}, build_flat_bath(0.1, 40.0, 201),
                          build_flat_bath(0.1, 40.0, 201)));  // n > 0
    CHECK_THROWS(joint_dispersive(p, build_flat_bath(1.0, 40.0, kMaxJointDimension + 1)));
}

TEST_CASE("model dispatch uses separate rates for the two JC reservoirs") {
    const BathSpec b = build_flat_bath(0.2, 20.0, 201);
    const JointSystem sys = make_joint_system(b, JCParams{1.0, 0.5, 0.2, 0.05, 0});
    const auto& modes = sys.hamiltonian.modes();
    CHECK(2.0 * kPi * modes.front().coupling * modes.front().coupling / b.spacing == doctest::Approx(0.2));
    CHECK(2.0 * kPi * modes.back().coupling * modes.back().coupling / b.spacing == doctest::Approx(0.05));
    CHECK(modes.back().source == 1);
}
