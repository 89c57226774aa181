#include "jointphase/validation.hpp"

#include "jointphase/bath.hpp"
#include "jointphase/interferometry.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace jointphase {

std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree) {
    if (x.size() != y.size() || degree < 0 || x.size() < static_cast<std::size_t>(degree + 1))
        throw std::invalid_argument("polyfit needs matching x, y and more points than the degree");
    const auto rows = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd a(rows, degree + 1);
    Eigen::VectorXd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        double power = 1.0;
        for (int j = 0; j <= degree; ++j, power *= x[i]) a(i, j) = power;
        b(i) = y[i];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    return {c.data(), c.data() + c.size()};
}

PhaseReport propagated_phase(const ModelSystem& sys, double t_final, PhaseMethod method, double dt) {
    const Trajectory traj = propagate(sys.h_c, sys.psi0, t_final, dt > 0.0 ? dt : default_step(t_final));
    return geometric_phase(traj, sys.h_s, method);
}

double jump_beta_slope(double B, double theta, double h) {
    auto beta = [&](double gamma) {
        const auto p = DispersiveQubitParams::cyclic_for(B, gamma, theta);
        return propagated_phase(dispersive_system(p), p.T, PhaseMethod::QuantumJump).beta_principal;
    };
    const double b0 = beta(0.0);
    const double s1 = wrap_phase(beta(h) - b0) / h;
    const double s2 = wrap_phase(beta(2.0 * h) - b0) / (2.0 * h);
    return 2.0 * s1 - s2;
}

double rk4_convergence_ratio(const ModelSystem& sys, double t_final, double dt) {
    const StateVector exact = exact_propagate_2level(sys.h_c, sys.psi0, t_final);
    auto error = [&](double step) {
        const Trajectory traj = propagate(sys.h_c, sys.psi0, t_final, step);
        return (traj.final_state().amplitudes() - exact.amplitudes()).norm();
    };
    return error(dt) / error(0.5 * dt);
}

double oracle_step(double bandwidth) { return 0.08 / bandwidth; }

namespace {

double max_norm_drift(const Trajectory& traj) {
    double drift = 0.0;
    for (const auto& s : traj.states) drift = std::max(drift, std::abs(s.norm_squared() - 1.0));
    return drift;
}

double max_excitation_drift(const Trajectory& traj, const std::vector<int>& excitations) {
    auto number = [&](const StateVector& s) {
        double total = 0.0;
        for (std::size_t i = 0; i < excitations.size(); ++i)
            total += excitations[i] * std::norm(s.amplitudes()(static_cast<Eigen::Index>(i)));
        return total;
    };
    const double start = number(traj.initial());
    double drift = 0.0;
    for (const auto& s : traj.states) drift = std::max(drift, std::abs(number(s) - start));
    return drift;
}

template <class Reference>
OracleMeasurement measure_oracle(const JointSystem& joint, const ModelSystem& sys, double t_cycle, double bandwidth,
                                 double t_window, Reference reference, bool relative_to_first) {
    OracleMeasurement m;
    const double dt = oracle_step(bandwidth);

    const JointTrajectory window = evolve_joint(joint, t_window, dt);
    for (std::size_t k = 1; k < window.path.size(); ++k) {
        const StateVector block = project_no_excitation(window.at(k));
        const StateVector ref = reference(window.path.times[k]);
        const double err = relative_to_first ? std::abs(block[0] - ref[0]) / std::abs(ref[0])
                                             : (block.amplitudes() - ref.amplitudes()).norm() / ref.amplitudes().norm();
        if (err > m.amplitude_error) {
            m.amplitude_error = err;
            m.worst_time = window.path.times[k];
        }
    }
    m.norm_drift = max_norm_drift(window.path);
    m.excitation_drift = max_excitation_drift(window.path, joint.excitations);
    m.transport_residual = parallel_transport_residual(window.path, joint.hamiltonian);

    const std::size_t stride = std::max<std::size_t>(1, step_count(t_cycle, dt) / 2000);
    const JointTrajectory cycle = evolve_joint(joint, t_cycle, dt, {stride});
    const JointPhaseReport report = joint_phase_report(cycle, joint.hamiltonian);
    m.norm_drift = std::max(m.norm_drift, max_norm_drift(cycle.path));
    m.independence_gap = report.independence_gap;
    m.beta_joint = report.report.beta_principal;
    m.beta_system = propagated_phase(sys, t_cycle, PhaseMethod::JointState).beta_principal;
    m.beta_gap = std::abs(wrap_phase(m.beta_joint - m.beta_system)) / std::abs(m.beta_system);
    return m;
}

}  // namespace

OracleMeasurement measure_dispersive_oracle(const DispersiveQubitParams& p, double bandwidth, std::size_t modes,
                                            double t_window) {
    const BathSpec bath = build_flat_bath(p.gamma, bandwidth, modes);
    const JointSystem joint = joint_dispersive(p, bath);
    auto reference = [&](double t) { return dispersive_state(p, t); };
    return measure_oracle(joint, dispersive_system(p), p.T, bandwidth, t_window, reference, true);
}

OracleMeasurement measure_jc_oracle(const JCParams& p, double bandwidth, std::size_t modes, double t_window) {
    const BathSpec bath = build_flat_bath(std::max(p.gamma, p.kappa), bandwidth, modes);
    const JointSystem joint = joint_jc(p, bath.with_rate(p.gamma), bath.with_rate(p.kappa));
    auto reference = [&](double t) { return dissipative_jc_state(p, t); };
    return measure_oracle(joint, jc_system(p), p.rabi_period(), bandwidth, t_window, reference, false);
}

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

namespace {

// Knobs for the default oracle run; W = 80 keeps the short-time transient
// of the discretised band near 1%.
constexpr double kOracleBandwidth = 80.0;
constexpr std::size_t kOracleModes = 1601;

struct Outcome {
    double measured;
    double tolerance;
    std::string detail;
    // Checks whose pass condition is a band set these instead of the tolerance.
    bool passed_override = false;
    bool use_override = false;
};

using CheckFn = std::function<Outcome()>;

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(4) << x;
    return os.str();
}

Outcome check_decay_robustness() {
    double worst = 0.0;
    for (double theta : {kPi / 6, kPi / 4, kPi / 2, 2 * kPi / 3})
        for (double gt : {0.0, 0.5, 1.0, 2.0, 5.0}) {
            const double B = 1.0;
            const auto p = DispersiveQubitParams::cyclic_for(B, gt / (2.0 * kPi / B), theta);
            const double beta = propagated_phase(dispersive_system(p), p.T, PhaseMethod::JointState).beta_principal;
            worst = std::max(worst, std::abs(wrap_phase(beta - dispersive_beta_cyclic(p).unwrapped)));
        }
    return {worst, 1e-7, "max |beta - (-pi(1 - cos theta))| over theta x gamma T grid"};
}

Outcome check_jump_slope() {
    double worst = 0.0;
    const double B = 1.0;
    for (double theta : {kPi / 6, kPi / 4, kPi / 2, 2 * kPi / 3}) {
        const double expected = -std::pow(kPi * std::sin(theta), 2) / (2.0 * B);
        worst = std::max(worst, std::abs(jump_beta_slope(B, theta) / expected - 1.0));
    }
    return {worst, 0.05, "relative error of d beta_jump / d gamma at gamma -> 0"};
}

struct JCFit {
    double linear;
    double quadratic;
};

JCFit fit_jc_beta(double delta) {
    std::vector<double> gammas, betas;
    JCParams base{1.0, delta, 0.0, 0.0, 0};
    const double beta0 = jc_beta_exact(base, base.rabi_period());
    for (int i = 1; i <= 10; ++i) {
        JCParams p = base;
        p.gamma = 0.01 * i;
        const double beta = propagated_phase(jc_system(p), p.rabi_period(), PhaseMethod::JointState).beta_principal;
        gammas.push_back(p.gamma);
        betas.push_back(wrap_phase(beta - beta0));
    }
    // beta - beta0 has no constant term; fit gamma, gamma^2, gamma^3.
    std::vector<double> scaled(betas.size());
    for (std::size_t i = 0; i < betas.size(); ++i) scaled[i] = betas[i] / gammas[i];
    const auto c = polyfit(gammas, scaled, 2);
    return {c[0], c[1]};
}

Outcome check_jc_first_order() {
    double worst = 0.0;
    for (double delta : {0.0, 0.5, 1.0}) worst = std::max(worst, std::abs(fit_jc_beta(delta).linear));
    return {worst, 1e-3, "max |linear coefficient| of beta(gamma), delta in {0, 0.5, 1}"};
}

Outcome check_jc_second_order() {
    double worst = 0.0;
    for (double delta : {0.0, 0.5, 1.0}) {
        const JCParams p{1.0, delta, 0.0, 0.0, 0};
        const double expected = jc_beta_second_order_coefficient(p);
        const double fitted = fit_jc_beta(delta).quadratic;
        // Relative error, with an absolute floor where the coefficient vanishes.
        worst = std::max(worst, std::abs(fitted - expected) / std::max(std::abs(expected), 1e-5));
    }
    return {worst, 0.10, "quadratic coefficient vs -3 pi delta g^2 / (64 Omega^5)"};
}

Outcome check_zero_decay_baselines() {
    double worst = 0.0;
    for (int n : {0, 1, 3})
        for (double delta : {0.0, 0.5, 1.0}) {
            const JCParams p{1.0, delta, 0.0, 0.0, n};
            const double expected = kPi * (1.0 - delta / (2.0 * p.rabi_frequency()));
            const double closed = dissipative_jc_beta_exact(p, p.rabi_period());
            const double numeric = propagated_phase(jc_system(p), p.rabi_period(), PhaseMethod::JointState).beta_principal;
            worst = std::max({worst, std::abs(wrap_phase(closed - expected)), std::abs(wrap_phase(numeric - expected))});
            if (n == 0) worst = std::max(worst, std::abs(wrap_phase(jc_beta_exact(p, p.rabi_period()) - expected)));
        }
    return {worst, 1e-8, "beta at gamma = kappa = 0 vs pi [1 - delta / (2 Omega_n)]"};
}

Outcome check_dissipative_symmetry() {
    double worst = 0.0;
    for (int n = 0; n <= 3; ++n) {
        const JCParams p{1.0, 1.0, 0.1, 0.1, n};
        const double beta0 = kPi * (1.0 - p.delta / (2.0 * p.rabi_frequency()));
        const double numeric = propagated_phase(jc_system(p), p.rabi_period(), PhaseMethod::JointState).beta_principal;
        const double closed = dissipative_jc_beta_exact(p, p.rabi_period());
        worst = std::max({worst, std::abs(wrap_phase(numeric - beta0)) / beta0, std::abs(wrap_phase(closed - beta0)) / beta0});
    }
    return {worst, 1e-3, "|beta_n - beta_n^0| / beta_n^0 at gamma = kappa = 0.1, n <= 3"};
}

Outcome check_contamination() {
    // First-order phi_d of the quantum-jump definition vs the closed estimate.
    double worst = 0.0;
    for (double delta : {0.5, 1.0}) {
        JCParams p{1.0, delta, 0.0, 0.0, 0};
        auto phi_d = [&](double gamma) {
            p.gamma = gamma;
            return propagated_phase(jc_system(p), p.rabi_period(), PhaseMethod::QuantumJump).dynamical_phase;
        };
        const double h = 1e-3;
        const double base = phi_d(0.0);
        const double slope = 2.0 * (phi_d(h) - base) / h - (phi_d(2.0 * h) - base) / (2.0 * h);
        p.gamma = 1.0;
        const double expected = previous_method_dynamical_contamination(p).value;
        worst = std::max(worst, std::abs(slope / expected - 1.0));
    }
    return {worst, 0.05, "relative error of d phi_d(jump) / d gamma vs -pi^2 g^2 delta / (8 Omega^4)"};
}

Outcome check_oracle_amplitude(const OracleMeasurement& m) {
    return {m.amplitude_error, 0.02, "no-excitation amplitude vs closed form, t <= 3 (worst at t = " + fmt(m.worst_time) + ")"};
}

Outcome check_ramsey_roundtrip() {
    const JCParams p{1.0, 0.5, 0.05, 0.0, 0};
    const RamseyOutcome r = ramsey_pg(p);
    const double err = std::abs(r.cos_beta_recovered - std::cos(r.beta_reference));
    return {err, 5e-3, "|cos beta from (2 P_g - 1)/u - cos beta|"};
}

Outcome check_fock_readout() {
    const JCParams p{1.0, 0.5, 0.05, 0.03, 1};
    const RamseyOutcome r = ramsey_pf_fock(p);
    return {std::abs(r.p_formula - r.p_detect), 5e-3, "|P_f formula - protocol simulation|, n = 1"};
}

Outcome check_sector_sums() {
    double worst = 0.0;
    for (const JCParams& p : {JCParams{1.0, 0.5, 0.05, 0.0, 0}, JCParams{1.0, 1.0, 0.1, 0.0, 0}}) {
        worst = std::max(worst, std::abs(ramsey_pg(p).sector_population_sum - 1.0));
        worst = std::max(worst, std::abs(ramsey_pg_multichannel(p, 0.5 * p.gamma).sector_population_sum - 1.0));
    }
    for (int n : {0, 1, 3})
        worst = std::max(worst, std::abs(ramsey_pf_fock(JCParams{1.0, 0.5, 0.08, 0.03, n}).sector_population_sum - 1.0));
    return {worst, 1e-8, "sector populations sum to 1"};
}

Outcome check_norm_monotone() {
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_rise = 0.0;
    for (int i = 0; i < 50; ++i) {
        const JCParams p{0.5 + u(rng), 2.0 * u(rng) - 1.0, 0.3 * u(rng), 0.3 * u(rng), static_cast<int>(4 * u(rng))};
        const ModelSystem sys = jc_system(p);
        const Trajectory traj = propagate(sys.h_c, sys.psi0, 2.0 * p.rabi_period(), 0.01);
        for (std::size_t k = 1; k < traj.size(); ++k)
            worst_rise = std::max(worst_rise, traj.states[k].norm_squared() - traj.states[k - 1].norm_squared());
    }
    return {worst_rise, 1e-14, "largest step-to-step increase of the no-jump norm"};
}

Outcome check_branch_invariance() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const JCParams p{0.3 + 1.5 * u(rng), 4.0 * u(rng) - 2.0, 0.5 * u(rng), 0.5 * u(rng), static_cast<int>(5 * u(rng))};
        const double t = 5.0 * u(rng);
        const Complex lam = jc_lambda(p);
        const CVector a = dissipative_jc_state_with_branch(p, t, lam).amplitudes();
        const CVector b = dissipative_jc_state_with_branch(p, t, -lam).amplitudes();
        worst = std::max(worst, (a - b).norm() / a.norm());
        if (p.n == 0) {
            JCParams q = p;
            q.kappa = 0.0;
            const Complex l0 = jc_lambda(q);
            const CVector c = jc_state_with_branch(q, t, l0).amplitudes();
            const CVector d = jc_state_with_branch(q, t, -l0).amplitudes();
            worst = std::max(worst, (c - d).norm() / c.norm());
        }
    }
    return {worst, 1e-12, "state change under lambda -> -lambda, 100 random points"};
}

Outcome check_dressed_completeness() {
    double worst = 0.0;
    for (int n : {0, 1, 3})
        for (double delta : {-1.0, 0.0, 0.5, 2.0}) {
            const DressedDecomposition d = dressed_decomposition(JCParams{1.0, delta, 0.1, 0.0, n});
            const CVector& plus = d.plus_state.amplitudes();
            const CVector& minus = d.minus_state.amplitudes();
            const CMatrix sum = plus * plus.adjoint() + minus * minus.adjoint();
            worst = std::max(worst, (sum - CMatrix::Identity(2, 2)).norm());
        }
    return {worst, 1e-12, "|| |+><+| + |-><-| - 1 ||"};
}

Outcome check_rk4_order() {
    const JCParams p{1.0, 0.5, 0.1, 0.05, 1};
    const double ratio = rk4_convergence_ratio(jc_system(p), p.rabi_period(), 0.05);
    Outcome o{ratio, 0.0, "err(dt) / err(dt/2) at dt = 0.05, expected in [12, 20]"};
    o.use_override = true;
    o.passed_override = ratio >= 12.0 && ratio <= 20.0;
    return o;
}

}  // namespace

ValidationReport run_validation(ValidationLevel level, std::ostream* progress) {
    ValidationReport report;
    auto run = [&](const std::string& name, const CheckFn& fn) {
        const auto start = std::chrono::steady_clock::now();
        ValidationCheck c;
        c.name = name;
        try {
            const Outcome o = fn();
            c.measured = o.measured;
            c.tolerance = o.tolerance;
            c.detail = o.detail;
            c.passed = o.use_override ? o.passed_override : (o.measured < o.tolerance);
        } catch (const std::exception& e) {
            c.passed = false;
            c.detail = std::string("threw: ") + e.what();
        }
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (progress)
            *progress << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured=" << fmt(c.measured)
                      << " tol=" << fmt(c.tolerance) << "  (" << fmt(c.seconds) << " s)  " << c.detail << '\n';
        report.checks.push_back(std::move(c));
    };

    run("dispersive-decay-robustness", check_decay_robustness);
    run("dispersive-jump-slope", check_jump_slope);
    run("jc-first-order-vanishes", check_jc_first_order);
    run("jc-second-order-coefficient", check_jc_second_order);
    run("zero-decay-baselines", check_zero_decay_baselines);
    run("dissipative-jc-symmetry", check_dissipative_symmetry);
    run("jump-dynamical-contamination", check_contamination);

    const auto p = DispersiveQubitParams::cyclic_for(1.0, 1.0, kPi / 2);
    OracleMeasurement oracle;
    run("oracle-amplitude", [&] {
        oracle = measure_dispersive_oracle(p, kOracleBandwidth, kOracleModes);
        return check_oracle_amplitude(oracle);
    });
    run("oracle-beta-vs-system", [&] { return Outcome{oracle.beta_gap, 0.01, "|beta_joint - beta_system| / |beta_system|"}; });
    run("oracle-parallel-transport", [&] { return Outcome{oracle.transport_residual, 1e-5, "max |<Phi|dPhi/dt>|"}; });
    run("oracle-norm-drift", [&] { return Outcome{oracle.norm_drift, 1e-9, "max | ||psi||^2 - 1 |"}; });
    run("oracle-excitation-conservation", [&] { return Outcome{oracle.excitation_drift, 1e-9, "max drift of <N_exc>"}; });
    run("oracle-phase-independence", [&] {
        return Outcome{oracle.independence_gap, 1e-12, "total phase vs no-excitation block phase"};
    });

    run("ramsey-roundtrip", check_ramsey_roundtrip);
    run("fock-readout", check_fock_readout);
    run("ramsey-sector-sums", check_sector_sums);
    run("norm-monotone", check_norm_monotone);
    run("branch-invariance", check_branch_invariance);
    run("dressed-completeness", check_dressed_completeness);
    run("rk4-fourth-order", check_rk4_order);

    if (level == ValidationLevel::Full) {
        run("oracle-bandwidth-ladder", [&] {
            // The short-time transient scales as 1/W: each doubling should halve it.
            std::vector<double> errors;
            for (double w : {40.0, 80.0, 160.0})
                errors.push_back(measure_dispersive_oracle(p, w, static_cast<std::size_t>(20 * w) + 1, 1.0).amplitude_error);
            const double r1 = errors[0] / errors[1];
            const double r2 = errors[1] / errors[2];
            Outcome o{std::min(r1, r2), 0.0,
                      "error ratios per doubling of W: " + fmt(r1) + ", " + fmt(r2) + " (expected in [1.6, 2.4])"};
            o.use_override = true;
            o.passed_override = std::min(r1, r2) >= 1.6 && std::max(r1, r2) <= 2.4;
            return o;
        });
        run("oracle-two-bath-jc", [&] {
            const JCParams jc{1.0, 0.5, 0.1, 0.05, 0};
            const OracleMeasurement m = measure_jc_oracle(jc, kOracleBandwidth, kOracleModes);
            const double worst = std::max({m.amplitude_error / 0.02, m.beta_gap / 0.01, m.norm_drift / 1e-9});
            return Outcome{worst, 1.0,
                           "max of amplitude/2%, beta gap/1%, norm drift/1e-9; amplitude " + fmt(m.amplitude_error) +
                               ", beta gap " + fmt(m.beta_gap)};
        });
    }
    return report;
}

}  // namespace jointphase
