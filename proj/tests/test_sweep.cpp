#include "jointphase/config.hpp"
#include "jointphase/errors.hpp"
#include "jointphase/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace jointphase;

namespace {

SweepConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::size_t error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return 0;
}

std::string csv(const SweepTable& t) {
    std::ostringstream os;
    t.write_csv(os);
    return os.str();
}

}  // namespace

TEST_CASE("config parsing") {
    const SweepConfig cfg = parse(
        "# comment\n"
        "[model]\n"
        "type = dispersive\n"
        "B = 2   ; inline comment\n"
        "[sweep]\n"
        "gamma = 0, 1, 5\n"
        "[run]\n"
        "methods = quantum-jump, joint-state\n"
        "threads = 3\n");
    CHECK(cfg.model == ModelKind::Dispersive);
    CHECK(cfg.params.at("B") == 2.0);
    REQUIRE(cfg.axes.size() == 1);
    CHECK(cfg.axes[0].values() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(cfg.methods == std::vector<SweepMethod>{SweepMethod::JointState, SweepMethod::QuantumJump});
    CHECK(cfg.threads == 3);
}

TEST_CASE("degrees convert theta at the boundary") {
    const SweepConfig cfg = parse("[model]\ntype = dispersive\ntheta = 90\n[run]\ndegrees = true\n");
    CHECK(cfg.params.at("theta") == doctest::Approx(kPi / 2));
}

TEST_CASE("config errors carry line numbers") {
    CHECK(error_line("[model]\ntype = dispersive\nkappa = 1\n") == 3);
    CHECK(error_line("[model]\ntype = jc\ng = abc\n") == 3);
    CHECK(error_line("[model]\ntype = qubit\n") == 2);
    CHECK(error_line("[model]\ntype = jc\n[sweep]\ng = 1, 2\n") == 4);
    CHECK(error_line("[model]\ntype = jc\n[sweep]\ng = 1, 2, 0\n") == 4);
    CHECK(error_line("[model]\ntype = jc\n[run]\nmethods = joint-state, magic\n") == 4);
    CHECK(error_line("[model]\ntype = jc\nfoo\n") == 3);
    CHECK(error_line("[nope]\n") == 1);
    CHECK(error_line("[model]\ntype = jc\ng = 1\ng = 2\n") == 4);
    CHECK_THROWS_AS(parse("[run]\ndt = 0.1\n"), ConfigError);  // no model type
    CHECK_THROWS_AS(parse("[model]\ntype = jc\n[sweep]\ng = 0,1,2\ndelta = 0,1,2\nn = 0,1,2\n"), ConfigError);
}

TEST_CASE("empty sweep gives one row per method") {
    SweepConfig cfg = parse("[model]\ntype = dispersive\ngamma = 0.2\n[run]\nmethods = joint-state, quantum-jump\n");
    const SweepTable t = run_sweep(cfg);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].method == SweepMethod::JointState);
    CHECK(t.rows[1].method == SweepMethod::QuantumJump);
    CHECK(t.rows[0].inputs.back() == doctest::Approx(2.0 * kPi));  // T filled in
}

TEST_CASE("decay sweep: joint-state beta is flat, quantum-jump beta moves") {
    // gamma T over [0, 5] at theta = pi/2, B = 1.
    const SweepConfig cfg = parse(
        "[model]\ntype = dispersive\ntheta = 1.5707963267948966\n"
        "[sweep]\ngamma = 0, 0.7957747154594768, 6\n"
        "[run]\nmethods = joint-state, quantum-jump\n");
    const SweepTable t = run_sweep(cfg);
    REQUIRE(t.rows.size() == 12);
    double previous_jump = 0.0;
    for (std::size_t i = 0; i < t.rows.size(); i += 2) {
        CHECK(t.rows[i].ok);
        CHECK(std::abs(t.rows[i].report.beta_principal) == doctest::Approx(kPi).epsilon(1e-9));
        const double jump = t.rows[i + 1].report.beta_principal;
        if (i > 0) CHECK(jump != doctest::Approx(previous_jump));
        previous_jump = jump;
    }
}

TEST_CASE("parallel sweep is byte-identical to serial") {
    const std::string text =
        "[model]\ntype = dissipative-jc\ngamma = 0.05\n"
        "[sweep]\ndelta = -1, 1, 5\nkappa = 0, 0.1, 3\n"
        "[run]\nmethods = joint-state, quantum-jump\n";
    SweepConfig serial = parse(text);
    SweepConfig parallel = serial;
    parallel.threads = 4;
    const std::string a = csv(run_sweep(serial));
    CHECK(a == csv(run_sweep(parallel)));
    CHECK(a == csv(run_sweep(serial)));
    CHECK(a.rfind("g,delta,gamma,kappa,n,T,method,phi,phi_d,beta_principal", 0) == 0);
}

TEST_CASE("per-point errors are recorded and the run continues") {
    // n = 0.5 is not a photon number; the other point is fine.
    const SweepConfig cfg = parse("[model]\ntype = jc\n[sweep]\nn = 0, 0.5, 2\n");
    const SweepTable t = run_sweep(cfg);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].error.empty());
    CHECK_FALSE(t.rows[1].error.empty());
    CHECK(std::isfinite(t.rows[0].p_detect));
}

TEST_CASE("oracle rows") {
    const SweepConfig cfg = parse(
        "[model]\ntype = dispersive\ngamma = 1\n[run]\nmethods = joint-state, oracle\nbath_W = 40\nbath_N = 801\n");
    const SweepTable t = run_sweep(cfg);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1].ok);
    CHECK(std::abs(wrap_phase(t.rows[1].report.beta_principal - t.rows[0].report.beta_principal)) < 0.01);

    // A period past the recurrence time is a per-row error.
    const SweepConfig late = parse(
        "[model]\ntype = dispersive\ngamma = 1\nT = 500\n[run]\nmethods = oracle\nbath_W = 40\nbath_N = 801\n");
    const SweepTable lt = run_sweep(late);
    CHECK_FALSE(lt.rows[0].error.empty());
    CHECK(csv(lt).find("non-cyclic") != std::string::npos);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(NAN).empty());
}
