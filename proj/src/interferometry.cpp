#include "jointphase/interferometry.hpp"

#include "jointphase/errors.hpp"
#include "jointphase/phase.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace jointphase {

namespace {

constexpr std::size_t kQuadraturePoints = 4001;

struct CycleIntegrals {
    Complex a;           // <e,n| amplitude at T, common phase dropped
    Complex b;           // <g,n+1| amplitude at T
    double excited = 0;  // int_0^T |a(t)|^2 dt
    double lower = 0;    // int_0^T |b(t)|^2 dt
};

CycleIntegrals integrate_cycle(const JCParams& p, double t_final) {
    const double h = t_final / static_cast<double>(kQuadraturePoints - 1);
    std::vector<double> pe(kQuadraturePoints), pg(kQuadraturePoints);
    const DissipativeStateOptions drop{true};
    for (std::size_t k = 0; k < kQuadraturePoints; ++k) {
        const StateVector psi = dissipative_jc_state(p, h * static_cast<double>(k), drop);
        pe[k] = std::norm(psi[0]);
        pg[k] = std::norm(psi[1]);
    }
    const StateVector last = dissipative_jc_state(p, t_final, drop);
    return {last[0], last[1], simpson(pe, h), simpson(pg, h)};
}

void check_guard(const JCParams& p, double guard, RamseyOutcome& out) {
    const double omega = p.rabi_frequency();
    const double worst = std::max(p.gamma, (p.n + 1) * p.kappa) / omega;
    if (worst >= guard) {
        std::ostringstream os;
        os << "decay/Rabi ratio " << worst << " exceeds the guard " << guard;
        throw std::invalid_argument(os.str());
    }
    out.outside_validity = false;
}

// Sets xi and rejects a collapsed visibility.
void finish_visibility(RamseyOutcome& out) {
    if (out.u <= kOverlapFloor) throw NumericalError("Ramsey visibility collapsed (u <= overlap floor)");
    const double rest = 1.0 - out.u * out.u - out.v * out.v;
    if (rest < -1e-12) throw NumericalError("u^2 + v^2 exceeds 1");
    out.xi = std::sqrt(std::max(rest, 0.0)) / std::sqrt(2.0);
}

void invert(RamseyOutcome& out, double offset, double fringe) {
    double c = (out.p_detect - offset) / fringe;
    out.inversion_clamped = std::abs(c) > 1.0;
    c = std::clamp(c, -1.0, 1.0);
    out.cos_beta_recovered = c;
    out.beta_recovered = std::acos(c);
}

}  // namespace

std::string_view to_string(RamseyProtocol p) {
    switch (p) {
        case RamseyProtocol::QubitPg: return "qubit-Pg";
        case RamseyProtocol::MultiChannelPg: return "multi-channel-Pg";
        case RamseyProtocol::FockPf: return "fock-Pf";
    }
    return "unknown";
}

RamseyOutcome ramsey_pg_multichannel(const JCParams& p, double gamma_g, double guard) {
    p.validate();
    if (p.n != 0 || p.kappa != 0.0) throw std::invalid_argument("the |g> readout covers n = 0, kappa = 0");
    if (!(gamma_g >= 0.0) || gamma_g > p.gamma) throw std::invalid_argument("need 0 <= gamma_g <= gamma");

    RamseyOutcome out;
    out.protocol = gamma_g == p.gamma ? RamseyProtocol::QubitPg : RamseyProtocol::MultiChannelPg;
    check_guard(p, guard, out);

    const double t_final = p.rabi_period();
    const double c2 = std::pow(std::cos(p.mixing_angle()), 2);
    out.u = 1.0 - 0.25 * p.gamma * t_final * (1.0 + c2);
    out.v = 0.125 * p.gamma * t_final * std::sin(2.0 * p.mixing_angle());
    finish_visibility(out);
    out.beta_reference = jc_beta_exact(p, t_final);
    const double ratio = p.gamma > 0.0 ? gamma_g / p.gamma : 1.0;

    // Sectors before the rotation: no-jump {a|e,0>, b|g,1>, |g,0>}/sqrt2,
    // a jump into |g,0> (weight gamma_g) and a jump out of {e, g}.
    const CycleIntegrals cyc = integrate_cycle(p, t_final);
    const double leaked = p.gamma * cyc.excited;  // jump probability of the e-branch
    const double to_g = 0.5 * ratio * leaked;
    const double to_other = 0.5 * (1.0 - ratio) * leaked;
    out.sector_population_sum = 0.5 * (std::norm(cyc.a) + std::norm(cyc.b)) + 0.5 + to_g + to_other;

    // g -> (g - e)/sqrt2, e -> (e + g)/sqrt2; the other lower state is untouched.
    out.p_detect = 0.25 * (std::norm(1.0 + cyc.a) + std::norm(cyc.b)) + 0.5 * to_g;

    const double offset = 0.25 * ((1.0 + ratio) + (out.u * out.u + out.v * out.v) * (1.0 - ratio));
    out.p_formula = offset + 0.5 * out.u * std::cos(out.beta_reference);
    invert(out, offset, 0.5 * out.u);
    return out;
}

RamseyOutcome ramsey_pg(const JCParams& p, double guard) { return ramsey_pg_multichannel(p, p.gamma, guard); }

RamseyOutcome ramsey_pf_fock(const JCParams& p, double guard) {
    p.validate();
    RamseyOutcome out;
    out.protocol = RamseyProtocol::FockPf;
    check_guard(p, guard, out);

    const double n = p.n;
    const double t_final = p.rabi_period();
    const double theta = p.mixing_angle();
    const double c2 = std::pow(std::cos(theta), 2);
    const double s2 = std::pow(std::sin(theta), 2);
    out.u = 1.0 - 0.25 * ((2.0 * n + 1.0) * p.kappa + p.gamma + (p.gamma - p.kappa) * c2) * t_final;
    out.v = 0.125 * (p.gamma - p.kappa) * t_final * std::sin(2.0 * theta);
    finish_visibility(out);
    const double denom = p.gamma * (1.0 + c2) + p.kappa * (2.0 * n + s2);
    if (denom > 0.0) {
        out.p_n = std::sqrt(p.gamma * (1.0 + c2) / denom);
        out.q_n = std::sqrt(n * p.kappa * (1.0 + c2) / denom);
        out.s_n = std::sqrt((n + 1.0) * p.kappa * s2 / denom);
    }
    out.beta_reference = dissipative_jc_beta_exact(p, t_final);

    // e-branch sectors: no-jump, atomic jump to |g> or |f> (gamma/2 each),
    // cavity jump from |e,n> or from |g,n+1>. f-branch: no-jump |f,n> or a
    // cavity jump to |f,n-1>.
    const CycleIntegrals cyc = integrate_cycle(p, t_final);
    const double atom_g = 0.5 * 0.5 * p.gamma * cyc.excited;
    const double atom_f = atom_g;
    const double cavity_e = 0.5 * n * p.kappa * cyc.excited;
    const double cavity_g = 0.5 * (n + 1.0) * p.kappa * cyc.lower;
    const double ref_decay = std::exp(-n * p.kappa * t_final);
    const double f_nojump = 0.5 * ref_decay;
    const double f_cavity = 0.5 * (1.0 - ref_decay);
    out.sector_population_sum = 0.5 * (std::norm(cyc.a) + std::norm(cyc.b)) + atom_g + atom_f + cavity_e + cavity_g +
                                f_nojump + f_cavity;

    // f -> (f - e)/sqrt2, e -> (e + f)/sqrt2. Both |f> components of the
    // vacuum sector interfere; every other sector contributes half of its
    // e or f population.
    const Complex ref_amp = std::exp(-0.5 * n * p.kappa * t_final);
    out.p_detect = 0.25 * std::norm(ref_amp + cyc.a) + 0.5 * atom_f + 0.5 * cavity_e + 0.5 * f_cavity;

    const double offset =
        0.25 * (1.0 + out.u * out.u + out.xi * out.xi * (out.p_n * out.p_n + 2.0 * out.q_n * out.q_n));
    const double fringe = 0.5 * out.u * std::exp(-0.5 * n * p.kappa * t_final);
    out.p_formula = offset + fringe * std::cos(out.beta_reference);
    invert(out, offset, fringe);
    return out;
}

Approximation previous_method_dynamical_contamination(const JCParams& p, double guard) {
    p.validate();
    const double omega = p.rabi_frequency();
    const double diff = p.gamma - p.kappa;
    const double value = -kPi * kPi * p.g * p.g * (p.n + 1) * p.delta * diff / (8.0 * std::pow(omega, 4));
    return {value, std::max(p.gamma, (p.n + 1) * p.kappa) / omega >= guard};
}

}  // namespace jointphase
