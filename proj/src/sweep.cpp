#include "jointphase/sweep.hpp"

#include "jointphase/bath.hpp"
#include "jointphase/errors.hpp"
#include "jointphase/interferometry.hpp"
#include "jointphase/models.hpp"
#include "jointphase/validation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <ostream>
#include <optional>
#include <thread>
#include <variant>

namespace jointphase {

namespace {

constexpr std::size_t kMaxStoredStates = 4000;

struct Point {
    std::vector<double> values;  // parameter_names order
    bool custom_period = false;
};

double default_value(const std::string& name) {
    if (name == "B" || name == "g") return 1.0;
    if (name == "theta") return kPi / 2.0;
    return 0.0;  // gamma, delta, kappa, n; T is filled in per point
}

std::vector<Point> grid(const SweepConfig& cfg) {
    const auto& names = parameter_names(cfg.model);
    Point base;
    for (const auto& name : names) {
        const auto it = cfg.params.find(name);
        base.values.push_back(it != cfg.params.end() ? it->second : default_value(name));
        if (name == "T") base.custom_period = it != cfg.params.end();
    }
    auto column = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
    };

    std::vector<Point> points{base};
    for (const auto& axis : cfg.axes) {
        std::vector<Point> next;
        // Earlier axes vary slowest.
        for (const auto& p : points)
            for (double v : axis.values()) {
                Point q = p;
                q.values[column(axis.name)] = v;
                if (axis.name == "T") q.custom_period = true;
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }
    return points;
}

int photon_number(double n) {
    if (n < 0.0 || n != std::floor(n) || n > 1e6) throw std::invalid_argument("n must be a non-negative integer");
    return static_cast<int>(n);
}

void add_warning(std::string& w, const char* flag) {
    if (!w.empty()) w += ';';
    w += flag;
}

struct Evaluated {
    ModelParams model;
    ModelSystem system;
    double period;
};

Evaluated build(const SweepConfig& cfg, Point& point) {
    auto& v = point.values;
    if (cfg.model == ModelKind::Dispersive) {
        DispersiveQubitParams p{v[0], v[1], v[2], 0.0};
        p.T = point.custom_period ? v[3] : 2.0 * kPi / p.B;
        v[3] = p.T;
        return {p, dispersive_system(p), p.T};
    }
    JCParams p;
    p.g = v[0];
    p.delta = v[1];
    p.gamma = v[2];
    if (cfg.model == ModelKind::JC) {
        p.n = photon_number(v[3]);
    } else {
        p.kappa = v[3];
        p.n = photon_number(v[4]);
    }
    double& t_slot = v.back();
    t_slot = point.custom_period ? t_slot : p.rabi_period();
    return {p, jc_system(p), t_slot};
}

std::vector<SweepRow> evaluate(const SweepConfig& cfg, Point point) {
    std::vector<SweepRow> rows;
    for (SweepMethod m : cfg.methods) {
        SweepRow row;
        row.inputs = point.values;
        row.method = m;
        rows.push_back(std::move(row));
    }

    auto fail_all = [&](const std::string& message) {
        for (auto& r : rows) r.error = message;
    };

    std::optional<Evaluated> built;
    try {
        built.emplace(build(cfg, point));
    } catch (const std::exception& e) {
        fail_all(e.what());
        return rows;
    }
    const Evaluated& ev = *built;
    for (auto& r : rows) r.inputs = point.values;

    std::string shared_warnings;
    double p_detect = NAN;
    if (const auto* d = std::get_if<DispersiveQubitParams>(&ev.model)) {
        if (!d->cyclic()) add_warning(shared_warnings, "non-cyclic");
    } else if (!point.custom_period) {
        const auto& jc = std::get<JCParams>(ev.model);
        try {
            p_detect = (jc.n == 0 && jc.kappa == 0.0) ? ramsey_pg(jc, cfg.guard).p_detect
                                                      : ramsey_pf_fock(jc, cfg.guard).p_detect;
        } catch (const std::exception&) {
            add_warning(shared_warnings, "ramsey-outside-guard");
        }
    }

    const double dt = cfg.dt > 0.0 ? cfg.dt : default_step(ev.period);
    std::optional<Trajectory> traj;
    for (auto& row : rows) {
        row.p_detect = p_detect;
        row.warnings = shared_warnings;
        try {
            if (row.method == SweepMethod::Oracle) {
                const double top_rate = std::visit(
                    [](const auto& p) {
                        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, JCParams>)
                            return std::max(p.gamma, p.kappa);
                        else
                            return p.gamma;
                    },
                    ev.model);
                const BathSpec bath = build_flat_bath(top_rate, cfg.bath_W, cfg.bath_N);
                const JointSystem joint = make_joint_system(bath, ev.model);
                const double joint_dt = std::min(dt, oracle_step(cfg.bath_W));
                const std::size_t steps = step_count(ev.period, joint_dt);
                const std::size_t stride = std::max<std::size_t>(1, steps / kMaxStoredStates);
                const JointTrajectory jt = evolve_joint(joint, ev.period, joint_dt, {stride});
                row.report = joint_phase_report(jt, joint.hamiltonian).report;
            } else {
                if (!traj) traj = propagate(ev.system.h_c, ev.system.psi0, ev.period, dt);
                row.report = geometric_phase(*traj, ev.system.h_s,
                                             row.method == SweepMethod::JointState ? PhaseMethod::JointState
                                                                                   : PhaseMethod::QuantumJump);
            }
            row.ok = true;
            if (row.report.survival_prob < 1e-6) add_warning(row.warnings, "low-survival");
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    }
    return rows;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void SweepTable::write_csv(std::ostream& out) const {
    for (const auto& name : input_names) out << name << ',';
    out << "method,phi,phi_d,beta_principal,beta_unwrapped,survival_prob,p_detect,warnings,error\n";
    for (const auto& r : rows) {
        for (double v : r.inputs) out << format_number(v) << ',';
        out << to_string(r.method) << ',';
        if (r.ok) {
            out << format_number(r.report.total_phase) << ',' << format_number(r.report.dynamical_phase) << ','
                << format_number(r.report.beta_principal) << ',' << format_number(r.report.beta_unwrapped) << ','
                << format_number(r.report.survival_prob) << ',';
        } else {
            out << ",,,,,";
        }
        out << format_number(r.p_detect) << ',' << csv_field(r.warnings) << ',' << csv_field(r.error) << '\n';
    }
}

SweepTable run_sweep(const SweepConfig& cfg) {
    if (cfg.methods.empty()) throw ConfigError(0, "methods", "no methods selected");
    const std::vector<Point> points = grid(cfg);
    std::vector<std::vector<SweepRow>> results(points.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) results[i] = evaluate(cfg, points[i]);
    };
    const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, std::max<std::size_t>(1, points.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    SweepTable table{parameter_names(cfg.model), {}};
    for (auto& block : results)
        for (auto& row : block) table.rows.push_back(std::move(row));
    return table;
}

}  // namespace jointphase
