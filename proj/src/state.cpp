#include "jointphase/state.hpp"

#include "jointphase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string_view>
#include <stdexcept>

namespace jointphase {

OrthogonalStates::OrthogonalStates(double overlap, double floor)
    : NumericalError([&] {
          std::ostringstream os;
          os << "states are orthogonal: |overlap| = " << overlap << " <= " << floor;
          return os.str();
      }()),
      overlap_(overlap) {}

ConfigError::ConfigError(std::size_t line, std::string field, const std::string& message)
    : std::runtime_error([&] {
          std::ostringstream os;
          if (line > 0) os << "line " << line << ": ";
          if (!field.empty()) os << "'" << field << "': ";
          os << message;
          return os.str();
      }()),
      line_(line),
      field_(std::move(field)) {}

Basis::Basis(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw std::invalid_argument("basis must contain at least one state");
    std::vector<std::string_view> sorted(labels_.begin(), labels_.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("basis labels must be distinct");
}

std::size_t Basis::index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw std::out_of_range("no basis state labelled '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

BasisPtr make_basis(std::vector<std::string> labels) {
    return std::make_shared<const Basis>(std::move(labels));
}

StateVector::StateVector(BasisPtr basis, CVector amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (!basis_) throw std::invalid_argument("state vector needs a basis");
    if (amplitudes_.size() == 0) throw std::invalid_argument("zero-dimensional state");
    if (static_cast<std::size_t>(amplitudes_.size()) != basis_->size())
        throw std::invalid_argument("amplitude count does not match basis size");
}

Complex StateVector::amplitude(const std::string& label) const {
    return (*this)[basis_->index_of(label)];
}

bool StateVector::same_basis(const StateVector& other) const {
    return basis_ == other.basis_ || *basis_ == *other.basis_;
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (!a.same_basis(b)) throw std::invalid_argument("inner product of states over different bases");
    return a.amplitudes().dot(b.amplitudes());
}

OperatorMatrix::OperatorMatrix(CMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
        throw std::invalid_argument("operator must be a non-empty square matrix");
}

double OperatorMatrix::hermiticity_defect() const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double OperatorMatrix::norm_bound() const {
    return entries_.cwiseAbs().rowwise().sum().maxCoeff();
}

OperatorMatrix OperatorMatrix::restrict_to(std::span<const std::size_t> indices) const {
    const auto n = static_cast<Eigen::Index>(indices.size());
    CMatrix sub(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            sub(r, c) = (*this)(indices[static_cast<std::size_t>(r)], indices[static_cast<std::size_t>(c)]);
    return OperatorMatrix(std::move(sub));
}

Complex expectation(const OperatorMatrix& op, const StateVector& psi) {
    if (op.dimension() != psi.dimension()) throw std::invalid_argument("operator/state dimension mismatch");
    return psi.amplitudes().dot(op.entries() * psi.amplitudes());
}

double Trajectory::spacing() const {
    if (times.size() < 2) return 0.0;
    return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

OperatorMatrix conditional_hamiltonian(const OperatorMatrix& h_s, const OperatorMatrix& o, double gamma) {
    const DecayChannel channel{o, gamma};
    return conditional_hamiltonian(h_s, std::span<const DecayChannel>(&channel, 1));
}

OperatorMatrix conditional_hamiltonian(const OperatorMatrix& h_s, std::span<const DecayChannel> channels) {
    if (!h_s.is_hermitian()) throw std::invalid_argument("system Hamiltonian must be Hermitian");
    CMatrix anti = CMatrix::Zero(h_s.entries().rows(), h_s.entries().cols());
    for (const auto& ch : channels) {
        if (ch.lowering.dimension() != h_s.dimension())
            throw std::invalid_argument("lowering operator dimension does not match the Hamiltonian");
        if (!(ch.rate >= 0.0)) throw std::invalid_argument("decay rate must be non-negative");
        if (ch.rate == 0.0) continue;
        CMatrix number = ch.lowering.entries().adjoint() * ch.lowering.entries();
        // o^dagger o is Hermitian in exact arithmetic; symmetrise the product.
        number = 0.5 * (number + number.adjoint()).eval();
        anti += (0.5 * ch.rate) * number;
    }
    return OperatorMatrix(h_s.entries() - kI * anti);
}

double default_step(double t_final) { return std::min(1e-3, t_final / 1e4); }

std::size_t step_count(double t_final, double dt) {
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("final time must be finite and >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (t_final == 0.0) return 0;
    const double ratio = t_final / dt;
    // Tolerate round-off in T/dt so T = k*dt does not gain a sliver step.
    return static_cast<std::size_t>(std::ceil(ratio - 1e-9 * ratio));
}

namespace detail {

void require_finite(const CVector& v, double t) {
    if (!v.allFinite()) {
        std::ostringstream os;
        os << "non-finite amplitudes at t = " << t << " (step too large?)";
        throw NumericalError(os.str());
    }
}

}  // namespace detail

Trajectory propagate(const OperatorMatrix& h, const StateVector& psi0, double t_final, double dt,
                     PropagationOptions options) {
    if (h.dimension() != psi0.dimension()) throw std::invalid_argument("Hamiltonian/state dimension mismatch");
    Trajectory traj = detail::rk4_trajectory(h, psi0, t_final, dt, options);
    traj.hamiltonian = std::make_shared<const OperatorMatrix>(h);
    return traj;
}

CMatrix exact_evolution_2level(const OperatorMatrix& h, double t) {
    if (h.dimension() != 2) throw std::invalid_argument("exact_evolution_2level needs a 2x2 generator");
    const CMatrix& m = h.entries();
    const Complex mean = 0.5 * (m(0, 0) + m(1, 1));
    const Complex half_split = 0.5 * (m(0, 0) - m(1, 1));
    // mu^2 = ((a-d)/2)^2 + bc; the eigenvalues are mean +/- mu.
    const Complex mu2 = half_split * half_split + m(0, 1) * m(1, 0);
    const Complex z = mu2 * t * t;

    // exp(-iHt) = e^{-i mean t} [cos(mu t) I - i sin(mu t)/mu (H - mean I)].
    // Both cos(mu t) and sin(mu t)/mu are entire in mu^2, so near an
    // exceptional point (mu -> 0) the Taylor series in z replaces the
    // cancellation-prone spectral form.
    Complex c;
    Complex s_over_mu;
    if (std::abs(z) < 1e-6) {
        c = 1.0 - z / 2.0 + z * z / 24.0 - z * z * z / 720.0;
        s_over_mu = t * (1.0 - z / 6.0 + z * z / 120.0 - z * z * z / 5040.0);
    } else {
        const Complex mu = std::sqrt(mu2);
        c = std::cos(mu * t);
        s_over_mu = std::sin(mu * t) / mu;
    }
    CMatrix k = m;
    k(0, 0) -= mean;
    k(1, 1) -= mean;
    CMatrix u = c * CMatrix::Identity(2, 2) - kI * s_over_mu * k;
    return std::exp(-kI * mean * t) * u;
}

StateVector exact_propagate_2level(const OperatorMatrix& h, const StateVector& psi0, double t) {
    if (psi0.dimension() != 2) throw std::invalid_argument("exact_propagate_2level needs a two-level state");
    CVector out = exact_evolution_2level(h, t) * psi0.amplitudes();
    detail::require_finite(out, t);
    return StateVector(psi0.basis(), std::move(out));
}

}  // namespace jointphase
