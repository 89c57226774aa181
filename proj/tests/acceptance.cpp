// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "jointphase/interferometry.hpp"
#include "jointphase/models.hpp"
#include "jointphase/phase.hpp"
#include "jointphase/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace jointphase;

namespace {

struct Verdict {
    bool passed;
    std::string detail;
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

int failures = 0;

void criterion(int id, const char* name, double time_limit, const std::function<Verdict()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = time_limit <= 0.0 || seconds < time_limit;
    const bool ok = v.passed && in_time;
    if (!ok) ++failures;
    std::printf("[%s] criterion %d %s: %s; %.2f s", ok ? "PASS" : "FAIL", id, name, v.detail.c_str(), seconds);
    if (time_limit > 0.0) std::printf(" (limit %.0f s)", time_limit);
    std::printf("\n");
    std::fflush(stdout);
}

double dispersive_joint_beta(double B, double gamma, double theta) {
    const auto p = DispersiveQubitParams::cyclic_for(B, gamma, theta);
    return propagated_phase(dispersive_system(p), p.T, PhaseMethod::JointState).beta_principal;
}

// beta(gamma) - beta(0) = c1 gamma + c2 gamma^2 + c3 gamma^3 over gamma = 0.01 .. 0.1.
std::pair<double, double> fit_jc(double delta) {
    JCParams p{1.0, delta, 0.0, 0.0, 0};
    const double b0 = propagated_phase(jc_system(p), p.rabi_period(), PhaseMethod::JointState).beta_principal;
    std::vector<double> gammas, scaled;
    for (int i = 1; i <= 10; ++i) {
        p.gamma = 0.01 * i;
        const double b = propagated_phase(jc_system(p), p.rabi_period(), PhaseMethod::JointState).beta_principal;
        gammas.push_back(p.gamma);
        scaled.push_back(wrap_phase(b - b0) / p.gamma);
    }
    const auto c = polyfit(gammas, scaled, 2);
    return {c[0], c[1]};
}

}  // namespace

int main() {
    const double thetas[] = {kPi / 6, kPi / 4, kPi / 2, 2 * kPi / 3};

    criterion(1, "decay robustness (dispersive, joint-state)", 5.0, [&] {
        double worst = 0.0;
        for (double theta : thetas)
            for (double gt : {0.0, 0.5, 1.0, 2.0, 5.0}) {
                const double beta = dispersive_joint_beta(1.0, gt / (2.0 * kPi), theta);
                worst = std::max(worst, std::abs(wrap_phase(beta + kPi * (1.0 - std::cos(theta)))));
            }
        return Verdict{worst < 1e-7, "max |beta + pi(1 - cos theta)| mod 2pi = " + num(worst) + " (tol 1e-7)"};
    });

    criterion(2, "quantum-jump slope at gamma -> 0", 10.0, [&] {
        double worst = 0.0;
        for (double theta : thetas) {
            const double expected = -std::pow(kPi * std::sin(theta), 2) / 2.0;
            worst = std::max(worst, std::abs(jump_beta_slope(1.0, theta) / expected - 1.0));
        }
        return Verdict{worst < 0.05, "max relative slope error = " + num(worst) + " (tol 0.05)"};
    });

    criterion(3, "JC first-order robustness and quadratic coefficient", 10.0, [&] {
        double worst_linear = 0.0;
        double worst_printed = 0.0;
        double worst_derived = 0.0;
        std::string quad;
        for (double delta : {0.0, 0.5, 1.0}) {
            const auto [c1, c2] = fit_jc(delta);
            const double omega = std::sqrt(1.0 + 0.25 * delta * delta);
            const double printed = kPi * delta * (3.0 - 0.5 * delta * delta) / (64.0 * std::pow(omega, 5));
            const double derived = jc_beta_second_order_coefficient(JCParams{1.0, delta, 0.0, 0.0, 0});
            // Relative error, with an absolute floor where the reference vanishes (delta = 0).
            worst_linear = std::max(worst_linear, std::abs(c1));
            worst_printed = std::max(worst_printed, std::abs(c2 - printed) / std::max(std::abs(printed), 1e-5));
            worst_derived = std::max(worst_derived, std::abs(c2 - derived) / std::max(std::abs(derived), 1e-5));
            quad += " d=" + num(delta) + ":fit " + num(c2) + "/ref " + num(printed);
        }
        const bool ok = worst_linear < 1e-3 && worst_printed < 0.10;
        return Verdict{ok, "max |c1| = " + num(worst_linear) + " (tol 1e-3); quadratic vs pi d(3g^2 - d^2/2)/(64 W^5) rel err " +
                               num(worst_printed) + " (tol 0.1) [" + quad +
                               " ]; vs -3 pi d g^2/(64 W^5) rel err " + num(worst_derived)};
    });

    criterion(4, "gamma = 0 baselines (JC and Fock)", 0.0, [&] {
        double worst = 0.0;
        for (double delta : {0.0, 0.5, 1.0}) {
            const JCParams p{1.0, delta, 0.0, 0.0, 0};
            const double expected = kPi * (1.0 - delta / (2.0 * p.rabi_frequency()));
            worst = std::max(worst, std::abs(wrap_phase(jc_beta_exact(p, p.rabi_period()) - expected)));
            const double numeric = propagated_phase(jc_system(p), p.rabi_period(), PhaseMethod::JointState).beta_principal;
            worst = std::max(worst, std::abs(wrap_phase(numeric - expected)));
        }
        for (int n : {0, 1, 3})
            for (double delta : {0.0, 0.5, 1.0}) {
                const JCParams p{1.0, delta, 0.0, 0.0, n};
                const double expected = kPi * (1.0 - delta / (2.0 * p.rabi_frequency()));
                worst = std::max(worst, std::abs(wrap_phase(dissipative_jc_beta_exact(p, p.rabi_period()) - expected)));
                const double numeric =
                    propagated_phase(jc_system(p), p.rabi_period(), PhaseMethod::JointState).beta_principal;
                worst = std::max(worst, std::abs(wrap_phase(numeric - expected)));
            }
        return Verdict{worst < 1e-8, "max |beta - pi[1 - delta/(2 Omega_n)]| = " + num(worst) + " (tol 1e-8)"};
    });

    criterion(5, "dissipative JC symmetry at gamma = kappa", 0.0, [&] {
        double worst = 0.0;
        for (int n = 0; n <= 3; ++n) {
            const JCParams p{1.0, 1.0, 0.1, 0.1, n};
            const double beta0 = kPi * (1.0 - p.delta / (2.0 * p.rabi_frequency()));
            const double closed = dissipative_jc_beta_exact(p, p.rabi_period());
            const double numeric = propagated_phase(jc_system(p), p.rabi_period(), PhaseMethod::JointState).beta_principal;
            worst = std::max({worst, std::abs(wrap_phase(closed - beta0)) / beta0,
                              std::abs(wrap_phase(numeric - beta0)) / beta0});
        }
        return Verdict{worst < 1e-3, "max |beta_n - beta_n^0| / beta_n^0 = " + num(worst) + " (tol 1e-3)"};
    });

    criterion(6, "bath oracle convergence (W = 40, N = 801)", 60.0, [&] {
        const auto p = DispersiveQubitParams::cyclic_for(1.0, 1.0, kPi / 2);
        const OracleMeasurement m = measure_dispersive_oracle(p, 40.0, 801, 3.0);
        const bool amp = m.amplitude_error < 0.02;
        const bool beta = m.beta_gap < 0.01;
        const bool transport = m.transport_residual < 1e-5;
        const bool drift = m.norm_drift < 1e-9;
        auto mark = [](bool b) { return b ? "ok" : "FAIL"; };
        return Verdict{amp && beta && transport && drift,
                       std::string("amplitude rel err ") + num(m.amplitude_error) + " at t=" + num(m.worst_time) +
                           " (tol 0.02, " + mark(amp) + "); beta gap " + num(m.beta_gap) + " (tol 0.01, " + mark(beta) +
                           "); transport residual " + num(m.transport_residual) + " (tol 1e-5, " + mark(transport) +
                           "); norm drift " + num(m.norm_drift) + " (tol 1e-9, " + mark(drift) + ")"};
    });

    criterion(7, "interferometry round trip", 0.0, [&] {
        const RamseyOutcome pg = ramsey_pg(JCParams{1.0, 0.5, 0.05, 0.0, 0});
        const double cos_err = std::abs(pg.cos_beta_recovered - std::cos(pg.beta_reference));
        const RamseyOutcome pf = ramsey_pf_fock(JCParams{1.0, 0.5, 0.05, 0.03, 1});
        const double pf_err = std::abs(pf.p_formula - pf.p_detect);
        return Verdict{cos_err < 5e-3 && pf_err < 5e-3,
                       "|cos beta_rec - cos beta| = " + num(cos_err) + " (tol 5e-3); |P_f formula - simulation| = " +
                           num(pf_err) + " (tol 5e-3)"};
    });

    criterion(8, "property suites under validate --level fast", 60.0, [&] {
        const ValidationReport report = run_validation(ValidationLevel::Fast);
        const char* required[] = {"norm-monotone", "branch-invariance", "dressed-completeness", "rk4-fourth-order"};
        bool ok = report.all_passed();
        std::string detail;
        for (const char* name : required) {
            const auto it = std::find_if(report.checks.begin(), report.checks.end(),
                                         [&](const ValidationCheck& c) { return c.name == name; });
            const bool found = it != report.checks.end();
            ok = ok && found && it->passed;
            detail += std::string(name) + "=" + (found ? num(it->measured) : "missing") + " ";
        }
        std::size_t passed = 0;
        for (const auto& c : report.checks) passed += c.passed ? 1 : 0;
        return Verdict{ok, detail + "; fast suite " + std::to_string(passed) + "/" + std::to_string(report.checks.size()) +
                               " green"};
    });

    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
