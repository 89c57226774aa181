#include "jointphase/config.hpp"

#include "jointphase/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace jointphase {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

double parse_number(std::string_view text, std::size_t line, const std::string& field) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ConfigError(line, field, "expected a number, got '" + std::string(text) + "'");
    return value;
}

std::size_t parse_count(std::string_view text, std::size_t line, const std::string& field) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ConfigError(line, field, "expected a non-negative integer, got '" + std::string(text) + "'");
    return value;
}

bool parse_bool(std::string_view text, std::size_t line, const std::string& field) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(line, field, "expected true or false");
}

bool valid_parameter(ModelKind k, const std::string& name) {
    const auto& names = parameter_names(k);
    return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

std::string_view to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Dispersive: return "dispersive";
        case ModelKind::JC: return "jc";
        case ModelKind::DissipativeJC: return "dissipative-jc";
    }
    return "unknown";
}

std::string_view to_string(SweepMethod m) {
    switch (m) {
        case SweepMethod::JointState: return "joint-state";
        case SweepMethod::QuantumJump: return "quantum-jump";
        case SweepMethod::Oracle: return "oracle";
    }
    return "unknown";
}

std::optional<SweepMethod> parse_method(std::string_view name) {
    if (name == "joint-state") return SweepMethod::JointState;
    if (name == "quantum-jump") return SweepMethod::QuantumJump;
    if (name == "oracle") return SweepMethod::Oracle;
    return std::nullopt;
}

const std::vector<std::string>& parameter_names(ModelKind k) {
    static const std::vector<std::string> dispersive{"B", "gamma", "theta", "T"};
    static const std::vector<std::string> jc{"g", "delta", "gamma", "n", "T"};
    static const std::vector<std::string> dissipative{"g", "delta", "gamma", "kappa", "n", "T"};
    switch (k) {
        case ModelKind::Dispersive: return dispersive;
        case ModelKind::JC: return jc;
        case ModelKind::DissipativeJC: return dissipative;
    }
    return dispersive;
}

std::vector<double> SweepAxis::values() const {
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i)
        out[i] = steps == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
    return out;
}

SweepConfig parse_config(std::istream& in) {
    SweepConfig cfg;
    std::string section;
    std::string raw;
    std::size_t line = 0;
    bool have_type = false;

    // Model keys are checked once the type is known, which may come later.
    struct Pending {
        std::size_t line;
        std::string key;
        std::string value;
        bool axis;
    };
    std::vector<Pending> pending;
    std::set<std::string> seen;

    while (std::getline(in, raw)) {
        ++line;
        std::string_view text = raw;
        if (const auto c = text.find_first_of(";#"); c != std::string_view::npos) text = text.substr(0, c);
        text = trim(text);
        if (text.empty()) continue;

        if (text.front() == '[') {
            if (text.back() != ']') throw ConfigError(line, "", "unterminated section header");
            section = std::string(trim(text.substr(1, text.size() - 2)));
            if (section != "model" && section != "sweep" && section != "run")
                throw ConfigError(line, section, "unknown section");
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line, "", "expected key = value");
        const std::string key(trim(text.substr(0, eq)));
        const std::string value(trim(text.substr(eq + 1)));
        if (key.empty()) throw ConfigError(line, "", "empty key");
        if (section.empty()) throw ConfigError(line, key, "key outside any section");
        if (!seen.insert(section + "." + key).second) throw ConfigError(line, key, "duplicate key");

        if (section == "model") {
            if (key == "type") {
                if (value == "dispersive") cfg.model = ModelKind::Dispersive;
                else if (value == "jc") cfg.model = ModelKind::JC;
                else if (value == "dissipative-jc") cfg.model = ModelKind::DissipativeJC;
                else throw ConfigError(line, key, "unknown model '" + value + "'");
                have_type = true;
            } else {
                pending.push_back({line, key, value, false});
            }
        } else if (section == "sweep") {
            pending.push_back({line, key, value, true});
        } else if (key == "methods") {
            cfg.methods.clear();
            for (auto name : split(value, ',')) {
                const auto m = parse_method(name);
                if (!m) throw ConfigError(line, key, "unknown method '" + std::string(name) + "'");
                if (std::find(cfg.methods.begin(), cfg.methods.end(), *m) != cfg.methods.end())
                    throw ConfigError(line, key, "method listed twice");
                cfg.methods.push_back(*m);
            }
            // Rows are emitted in a fixed method order.
            std::sort(cfg.methods.begin(), cfg.methods.end());
        } else if (key == "dt") {
            cfg.dt = parse_number(value, line, key);
            if (cfg.dt < 0.0) throw ConfigError(line, key, "dt must be >= 0");
        } else if (key == "bath_W") {
            cfg.bath_W = parse_number(value, line, key);
        } else if (key == "bath_N") {
            cfg.bath_N = parse_count(value, line, key);
        } else if (key == "guard") {
            cfg.guard = parse_number(value, line, key);
        } else if (key == "degrees") {
            cfg.degrees = parse_bool(value, line, key);
        } else if (key == "threads") {
            cfg.threads = parse_count(value, line, key);
            if (cfg.threads == 0) throw ConfigError(line, key, "threads must be >= 1");
        } else if (key == "output") {
            cfg.output = value;
        } else {
            throw ConfigError(line, key, "unknown [run] key");
        }
    }
    if (!have_type) throw ConfigError(0, "type", "[model] type is required");

    const double angle_scale = cfg.degrees ? 3.14159265358979323846 / 180.0 : 1.0;
    for (const auto& p : pending) {
        if (!valid_parameter(cfg.model, p.key))
            throw ConfigError(p.line, p.key,
                              "not a parameter of the " + std::string(to_string(cfg.model)) + " model");
        const double scale = p.key == "theta" ? angle_scale : 1.0;
        if (!p.axis) {
            cfg.params[p.key] = parse_number(p.value, p.line, p.key) * scale;
            continue;
        }
        const auto parts = split(p.value, ',');
        if (parts.size() != 3) throw ConfigError(p.line, p.key, "axis needs start, stop, steps");
        SweepAxis axis{p.key, parse_number(parts[0], p.line, p.key) * scale,
                       parse_number(parts[1], p.line, p.key) * scale, parse_count(parts[2], p.line, p.key)};
        if (axis.steps < 1) throw ConfigError(p.line, p.key, "steps must be >= 1");
        cfg.axes.push_back(axis);
        if (cfg.axes.size() > 2) throw ConfigError(p.line, p.key, "at most two sweep axes");
    }
    for (const auto& axis : cfg.axes)
        if (cfg.params.count(axis.name)) throw ConfigError(0, axis.name, "parameter is both fixed and swept");
    return cfg;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "", "cannot open config file '" + path + "'");
    return parse_config(in);
}

}  // namespace jointphase
