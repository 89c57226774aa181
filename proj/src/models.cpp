#include "jointphase/models.hpp"

#include "jointphase/phase.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace jointphase {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

BasisPtr doublet_basis(int n) {
    return make_basis({"e," + std::to_string(n), "g," + std::to_string(n + 1)});
}

const BasisPtr& qubit_basis() {
    static const BasisPtr basis = make_basis({"e", "g"});
    return basis;
}

}  // namespace

void DispersiveQubitParams::validate() const {
    require(std::isfinite(B) && B > 0.0, "B must be positive");
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
    require(theta >= 0.0 && theta <= kPi, "theta must lie in [0, pi]");
    require(std::isfinite(B * T) && T >= 0.0, "T must be finite and >= 0");
}

bool DispersiveQubitParams::cyclic() const { return std::abs(B * T - 2.0 * kPi) < 1e-12; }

DispersiveQubitParams DispersiveQubitParams::cyclic_for(double B, double gamma, double theta) {
    return {B, gamma, theta, 2.0 * kPi / B};
}

void JCParams::validate() const {
    require(std::isfinite(g) && g > 0.0, "g must be positive");
    require(std::isfinite(delta), "delta must be finite");
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
    require(std::isfinite(kappa) && kappa >= 0.0, "kappa must be >= 0");
    require(n >= 0, "photon number must be >= 0");
}

double JCParams::rabi_frequency() const {
    return std::sqrt(g * g * (n + 1) + 0.25 * delta * delta);
}

double JCParams::rabi_period() const { return kPi / rabi_frequency(); }

double JCParams::mixing_angle() const {
    return std::acos(std::clamp(delta / (2.0 * rabi_frequency()), -1.0, 1.0));
}

ModelSystem dispersive_system(const DispersiveQubitParams& p) {
    p.validate();
    CMatrix h(2, 2);
    h << 0.5 * p.B, 0.0, 0.0, -0.5 * p.B;
    CMatrix lower = CMatrix::Zero(2, 2);
    lower(1, 0) = 1.0;  // |g><e|
    OperatorMatrix h_s(h);
    OperatorMatrix h_c = conditional_hamiltonian(h_s, OperatorMatrix(lower), p.gamma);
    CVector psi(2);
    psi << std::cos(0.5 * p.theta), std::sin(0.5 * p.theta);
    return {h_s, h_c, StateVector(qubit_basis(), psi), 2.0 * kPi / p.B};
}

ModelSystem jc_system(const JCParams& p) {
    p.validate();
    // Atom {e, g} x Fock {0..n+1}; index = atom * levels + photons.
    const int levels = p.n + 2;
    const Eigen::Index dim = 2 * levels;
    auto idx = [levels](int atom, int photons) { return static_cast<Eigen::Index>(atom * levels + photons); };

    CMatrix h = CMatrix::Zero(dim, dim);
    CMatrix sigma_minus = CMatrix::Zero(dim, dim);
    CMatrix a = CMatrix::Zero(dim, dim);
    for (int atom = 0; atom < 2; ++atom)
        for (int k = 0; k < levels; ++k) {
            h(idx(atom, k), idx(atom, k)) = p.delta * k;
            if (k > 0) a(idx(atom, k - 1), idx(atom, k)) = std::sqrt(static_cast<double>(k));
        }
    for (int k = 0; k < levels; ++k) sigma_minus(idx(1, k), idx(0, k)) = 1.0;
    for (int k = 0; k + 1 < levels; ++k) {
        // g a^dag s- couples |e,k> to |g,k+1>.
        const double c = p.g * std::sqrt(static_cast<double>(k + 1));
        h(idx(1, k + 1), idx(0, k)) = c;
        h(idx(0, k), idx(1, k + 1)) = c;
    }

    const OperatorMatrix full(h);
    const std::array<DecayChannel, 2> channels{DecayChannel{OperatorMatrix(sigma_minus), p.gamma},
                                               DecayChannel{OperatorMatrix(a), p.kappa}};
    const OperatorMatrix full_c = conditional_hamiltonian(full, channels);

    const std::array<std::size_t, 2> doublet{static_cast<std::size_t>(idx(0, p.n)),
                                             static_cast<std::size_t>(idx(1, p.n + 1))};
    CVector psi(2);
    psi << 1.0, 0.0;
    return {full.restrict_to(doublet), full_c.restrict_to(doublet), StateVector(doublet_basis(p.n), psi),
            p.rabi_period()};
}

StateVector dispersive_state(const DispersiveQubitParams& p, double t) {
    p.validate();
    require(t >= 0.0, "time must be >= 0");
    CVector psi(2);
    psi << std::exp(Complex(-0.5 * p.gamma * t, -0.5 * p.B * t)) * std::cos(0.5 * p.theta),
        std::exp(Complex(0.0, 0.5 * p.B * t)) * std::sin(0.5 * p.theta);
    return StateVector(qubit_basis(), psi);
}

Angle dispersive_beta_cyclic(const DispersiveQubitParams& p) {
    p.validate();
    if (!p.cyclic()) throw std::invalid_argument("dispersive_beta_cyclic needs B T = 2 pi");
    const double beta = -kPi * (1.0 - std::cos(p.theta));
    return {beta, wrap_phase(beta)};
}

double dispersive_beta_jump_first_order(const DispersiveQubitParams& p) {
    const double s = kPi * std::sin(p.theta);
    return dispersive_beta_cyclic(p).unwrapped - p.gamma * s * s / (2.0 * p.B);
}

Complex jc_lambda(const JCParams& p) {
    const Complex shift(0.5 * p.delta, 0.25 * (p.gamma - p.kappa));
    return std::sqrt(p.g * p.g * (p.n + 1) + shift * shift);
}

StateVector jc_state_with_branch(const JCParams& p, double t, Complex lam) {
    const Complex shift(0.5 * p.delta, 0.25 * p.gamma);
    const Complex ep = std::exp(kI * lam * t);
    const Complex em = std::exp(-kI * lam * t);
    const Complex pre = std::exp(-Complex(0.25 * p.gamma, 0.5 * p.delta) * t) / (2.0 * lam);
    CVector psi(2);
    psi << pre * ((lam + shift) * ep + (lam - shift) * em), -pre * p.g * (ep - em);
    return StateVector(doublet_basis(0), psi);
}

StateVector jc_state(const JCParams& p, double t) {
    p.validate();
    require(p.n == 0 && p.kappa == 0.0, "jc_state covers n = 0, kappa = 0; use dissipative_jc_state");
    return jc_state_with_branch(p, t, jc_lambda(p));
}

double jc_beta_exact(const JCParams& p, double t) {
    const StateVector psi = jc_state(p, t);
    // phi_d = -<e,0|H_s|e,0> t = 0, so beta is the total phase.
    const Complex overlap = psi[0];
    if (std::abs(overlap) <= kOverlapFloor) throw OrthogonalStates(std::abs(overlap), kOverlapFloor);
    return wrap_phase(std::arg(overlap));
}

JCExpansion jc_lambda_expansion(const JCParams& p, double guard) {
    p.validate();
    require(p.n == 0 && p.kappa == 0.0, "jc_lambda_expansion covers n = 0, kappa = 0");
    const double omega = p.rabi_frequency();
    JCExpansion e;
    e.lambda = Complex(omega - p.g * p.g * p.gamma * p.gamma / (32.0 * omega * omega * omega),
                       p.delta * p.gamma / (8.0 * omega));
    e.beta0 = kPi * (1.0 - p.delta / (2.0 * omega));
    e.beta = e.beta0 + jc_beta_second_order_coefficient(p) * p.gamma * p.gamma;
    e.outside_validity = p.gamma / omega >= guard;
    return e;
}

double jc_beta_second_order_coefficient(const JCParams& p) {
    const double omega = p.rabi_frequency();
    return -3.0 * kPi * p.delta * p.g * p.g * (p.n + 1) / (64.0 * std::pow(omega, 5));
}

DressedDecomposition dressed_decomposition(const JCParams& p) {
    p.validate();
    require(p.rabi_frequency() > 0.0, "Rabi frequency must be positive");
    const double theta = p.mixing_angle();
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const BasisPtr basis = doublet_basis(p.n);
    CVector plus(2), minus(2);
    plus << c, s;
    minus << s, -c;
    return {StateVector(basis, plus), StateVector(basis, minus), p.gamma * c * c, p.gamma * s * s, theta};
}

StateVector dressed_approximate_state(const JCParams& p, double t) {
    const DressedDecomposition d = dressed_decomposition(p);
    const double omega = p.rabi_frequency();
    const double c = std::cos(0.5 * d.theta);
    const double s = std::sin(0.5 * d.theta);
    // In the dressed-state convention the |g,n+1> basis vector carries the
    // opposite sign; with that sign, |+> has energy (n + 1/2) delta - Omega_n
    // and |-> has (n + 1/2) delta + Omega_n. |e,n> = c|+> + s|->.
    const Complex common = std::exp(Complex(0.0, -(p.n + 0.5) * p.delta * t));
    const Complex amp_plus = c * std::exp(Complex(-0.5 * d.gamma_plus * t, omega * t));
    const Complex amp_minus = s * std::exp(Complex(-0.5 * d.gamma_minus * t, -omega * t));
    const CVector dressed = amp_plus * d.plus_state.amplitudes() + amp_minus * d.minus_state.amplitudes();
    CVector psi(2);
    psi << common * dressed(0), -common * dressed(1);
    return StateVector(d.plus_state.basis(), psi);
}

StateVector dissipative_jc_state_with_branch(const JCParams& p, double t, Complex lam) {
    const Complex shift(0.5 * p.delta, 0.25 * (p.gamma - p.kappa));
    const double n = p.n;
    const Complex ep = std::exp(kI * lam * t);
    const Complex em = std::exp(-kI * lam * t);
    const Complex rate = Complex(0.5 * p.kappa, p.delta) * ((2.0 * n + 1.0) / 2.0) + 0.25 * p.gamma;
    const Complex pre = std::exp(-rate * t) / (2.0 * lam);
    CVector psi(2);
    psi << pre * ((lam + shift) * ep + (lam - shift) * em), -pre * p.g * std::sqrt(n + 1.0) * (ep - em);
    return StateVector(doublet_basis(p.n), psi);
}

StateVector dissipative_jc_state(const JCParams& p, double t, DissipativeStateOptions options) {
    p.validate();
    StateVector psi = dissipative_jc_state_with_branch(p, t, jc_lambda(p));
    if (!options.drop_common_phase) return psi;
    return StateVector(psi.basis(), std::exp(Complex(0.0, p.n * p.delta * t)) * psi.amplitudes());
}

double dissipative_jc_beta_exact(const JCParams& p, double t) {
    const StateVector psi = dissipative_jc_state(p, t);
    const Complex overlap = psi[0];
    if (std::abs(overlap) <= kOverlapFloor) throw OrthogonalStates(std::abs(overlap), kOverlapFloor);
    const double phi_d = -p.n * p.delta * t;
    return wrap_phase(std::arg(overlap) - phi_d);
}

DissipativeExpansion dissipative_jc_beta_expansion(const JCParams& p, double guard) {
    p.validate();
    const double omega = p.rabi_frequency();
    const double diff = p.gamma - p.kappa;
    DissipativeExpansion e;
    e.beta0 = kPi * (1.0 - p.delta / (2.0 * omega));
    e.beta = e.beta0 + jc_beta_second_order_coefficient(p) * diff * diff;
    e.outside_validity = std::abs(diff) / omega >= guard;
    return e;
}

}  // namespace jointphase
