// jointphase: single-point phases, parameter sweeps, the validation suite
// and Ramsey readouts from the command line.
//
// Exit codes: 0 success, 1 config error, 2 numerical failure, 3 validation failure.

#include "jointphase/config.hpp"
#include "jointphase/errors.hpp"
#include "jointphase/interferometry.hpp"
#include "jointphase/sweep.hpp"
#include "jointphase/validation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

namespace jp = jointphase;

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumerical = 2, kValidation = 3 };

struct Options {
    std::string config;
    std::string out;
    std::string method;
    std::string level = "fast";
    std::size_t threads = 0;
    std::optional<double> gamma_g;
};

jp::SweepConfig load(const Options& o) {
    jp::SweepConfig cfg = jp::load_config(o.config);
    if (!o.method.empty()) {
        cfg.methods.clear();
        std::size_t pos = 0;
        while (pos <= o.method.size()) {
            const auto comma = o.method.find(',', pos);
            const std::string name = o.method.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            const auto m = jp::parse_method(name);
            if (!m) throw jp::ConfigError(0, "--method", "unknown method '" + name + "'");
            cfg.methods.push_back(*m);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        std::sort(cfg.methods.begin(), cfg.methods.end());
        cfg.methods.erase(std::unique(cfg.methods.begin(), cfg.methods.end()), cfg.methods.end());
    }
    if (o.threads > 0) cfg.threads = o.threads;
    if (!o.out.empty()) cfg.output = o.out;
    return cfg;
}

// Writes to cfg.output, or stdout when it is empty.
template <class Fn>
void emit(const std::string& path, Fn&& write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw jp::ConfigError(0, "output", "cannot write '" + path + "'");
    write(out);
}

int run_table(const Options& o, bool single_point) {
    jp::SweepConfig cfg = load(o);
    if (single_point && !cfg.axes.empty())
        throw jp::ConfigError(0, "sweep", "the phase command takes a config without sweep axes");
    const jp::SweepTable table = jp::run_sweep(cfg);
    emit(cfg.output, [&](std::ostream& os) { table.write_csv(os); });
    if (single_point)
        for (const auto& row : table.rows)
            if (!row.error.empty()) {
                std::cerr << "error (" << jp::to_string(row.method) << "): " << row.error << '\n';
                return kNumerical;
            }
    return kOk;
}

jp::JCParams jc_params(const jp::SweepConfig& cfg) {
    if (cfg.model == jp::ModelKind::Dispersive)
        throw jp::ConfigError(0, "type", "the ramsey command needs a jc or dissipative-jc model");
    if (!cfg.axes.empty()) throw jp::ConfigError(0, "sweep", "the ramsey command takes a single point");
    if (cfg.params.count("T")) throw jp::ConfigError(0, "T", "the Ramsey protocol runs for one Rabi cycle; drop T");
    auto get = [&](const char* name, double fallback) {
        const auto it = cfg.params.find(name);
        return it == cfg.params.end() ? fallback : it->second;
    };
    jp::JCParams p;
    p.g = get("g", 1.0);
    p.delta = get("delta", 0.0);
    p.gamma = get("gamma", 0.0);
    p.kappa = get("kappa", 0.0);
    const double n = get("n", 0.0);
    if (n < 0.0 || n != static_cast<int>(n)) throw jp::ConfigError(0, "n", "n must be a non-negative integer");
    p.n = static_cast<int>(n);
    return p;
}

int run_ramsey(const Options& o) {
    const jp::SweepConfig cfg = load(o);
    const jp::JCParams p = jc_params(cfg);
    jp::RamseyOutcome r;
    if (o.gamma_g) r = jp::ramsey_pg_multichannel(p, *o.gamma_g, cfg.guard);
    else if (p.n == 0 && p.kappa == 0.0) r = jp::ramsey_pg(p, cfg.guard);
    else r = jp::ramsey_pf_fock(p, cfg.guard);
    const jp::Approximation contamination = jp::previous_method_dynamical_contamination(p, cfg.guard);

    emit(cfg.output, [&](std::ostream& os) {
        using jp::format_number;
        os << "protocol,p_detect,p_formula,u,v,xi,p_n,q_n,s_n,beta_reference,cos_beta_recovered,beta_recovered,"
              "sector_population_sum,jump_phi_d_estimate,warnings\n";
        std::string warnings;
        if (r.inversion_clamped) warnings = "inversion-clamped";
        if (contamination.outside_validity) warnings += warnings.empty() ? "outside-validity" : ";outside-validity";
        os << jp::to_string(r.protocol) << ',' << format_number(r.p_detect) << ',' << format_number(r.p_formula) << ','
           << format_number(r.u) << ',' << format_number(r.v) << ',' << format_number(r.xi) << ','
           << format_number(r.p_n) << ',' << format_number(r.q_n) << ',' << format_number(r.s_n) << ','
           << format_number(r.beta_reference) << ',' << format_number(r.cos_beta_recovered) << ','
           << format_number(r.beta_recovered) << ',' << format_number(r.sector_population_sum) << ','
           << format_number(contamination.value) << ',' << warnings << '\n';
    });
    return kOk;
}

int run_validate(const Options& o) {
    jp::ValidationLevel level;
    if (o.level == "fast") level = jp::ValidationLevel::Fast;
    else if (o.level == "full") level = jp::ValidationLevel::Full;
    else throw jp::ConfigError(0, "--level", "expected fast or full");

    const jp::ValidationReport report = jp::run_validation(level, &std::cout);
    std::size_t failed = 0;
    for (const auto& c : report.checks) failed += c.passed ? 0 : 1;
    std::cout << (failed == 0 ? "all " : "") << report.checks.size() - failed << '/' << report.checks.size()
              << " checks passed\n";
    return failed == 0 ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometric phases of decaying quantum systems"};
    app.require_subcommand(1);
    Options o;

    auto* phase = app.add_subcommand("phase", "phases at a single parameter point");
    auto* sweep = app.add_subcommand("sweep", "phases over a parameter grid, as CSV");
    auto* validate = app.add_subcommand("validate", "run the cross-check suite");
    auto* ramsey = app.add_subcommand("ramsey", "Ramsey readout of the geometric phase");
    for (auto* sub : {phase, sweep, ramsey}) {
        sub->add_option("--config", o.config, "config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output CSV (default: [run] output, else stdout)");
    }
    for (auto* sub : {phase, sweep}) {
        sub->add_option("--method", o.method, "comma-separated subset of joint-state,quantum-jump,oracle");
        sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    }
    ramsey->add_option("--gamma-g", o.gamma_g, "decay rate into |g> when other channels exist");
    validate->add_option("--level", o.level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*phase) return run_table(o, true);
        if (*sweep) return run_table(o, false);
        if (*ramsey) return run_ramsey(o);
        return run_validate(o);
    } catch (const jp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const jp::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
}
