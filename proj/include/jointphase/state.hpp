#pragma once

// Complex state and operator primitives, plus fixed-step propagation of
// no-jump trajectories under (possibly non-Hermitian) time-independent
// generators. hbar = 1; frequencies and rates share one angular unit.

#include <Eigen/Dense>

#include <complex>
#include <concepts>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace jointphase {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr Complex kI{0.0, 1.0};

/// Ordered basis-state labels, shared between all states of a trajectory.
class Basis {
public:
    explicit Basis(std::vector<std::string> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    /// Index of `label`; throws std::out_of_range when absent.
    std::size_t index_of(const std::string& label) const;

    bool operator==(const Basis& other) const noexcept { return labels_ == other.labels_; }

private:
    std::vector<std::string> labels_;
};

using BasisPtr = std::shared_ptr<const Basis>;

BasisPtr make_basis(std::vector<std::string> labels);

class StateVector {
public:
    StateVector(BasisPtr basis, CVector amplitudes);

    const BasisPtr& basis() const noexcept { return basis_; }
    const CVector& amplitudes() const noexcept { return amplitudes_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }
    Complex amplitude(const std::string& label) const;

    double norm_squared() const { return amplitudes_.squaredNorm(); }
    bool same_basis(const StateVector& other) const;

private:
    BasisPtr basis_;
    CVector amplitudes_;
};

/// <a|b>, conjugating `a`.
Complex inner(const StateVector& a, const StateVector& b);

/// Dense complex square matrix in angular-frequency units.
class OperatorMatrix {
public:
    explicit OperatorMatrix(CMatrix entries);

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const CMatrix& entries() const noexcept { return entries_; }
    Complex operator()(std::size_t r, std::size_t c) const {
        return entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    /// max |A - A^dagger| entrywise.
    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() < tol; }
    /// Largest absolute row sum; a cheap upper bound on the spectral radius.
    double norm_bound() const;

    OperatorMatrix adjoint() const { return OperatorMatrix(entries_.adjoint()); }
    /// Submatrix on the given index set, in the given order.
    OperatorMatrix restrict_to(std::span<const std::size_t> indices) const;

    void apply(const CVector& x, CVector& y) const { y.noalias() = entries_ * x; }

private:
    CMatrix entries_;
};

/// <psi|A|psi> without normalisation.
Complex expectation(const OperatorMatrix& op, const StateVector& psi);

/// Anything that can act linearly on an amplitude vector.
template <class Op>
concept LinearOperator = requires(const Op& op, const CVector& x, CVector& y) {
    { op.dimension() } -> std::convertible_to<std::size_t>;
    op.apply(x, y);
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    /// Generator of the motion when it is a dense matrix; null for
    /// structured generators (bath oracle), which are carried alongside.
    std::shared_ptr<const OperatorMatrix> hamiltonian;

    std::size_t size() const noexcept { return times.size(); }
    const StateVector& initial() const { return states.front(); }
    const StateVector& final_state() const { return states.back(); }
    /// Spacing of the stored grid (uniform by construction).
    double spacing() const;
};

/// A lowering operator `o` paired with its decay rate.
struct DecayChannel {
    OperatorMatrix lowering;
    double rate;
};

/// H_s - i (gamma/2) o^dagger o.
OperatorMatrix conditional_hamiltonian(const OperatorMatrix& h_s, const OperatorMatrix& o, double gamma);
/// H_s - i sum_j (gamma_j/2) o_j^dagger o_j.
OperatorMatrix conditional_hamiltonian(const OperatorMatrix& h_s, std::span<const DecayChannel> channels);

struct PropagationOptions {
    /// Keep every `stride`-th step. The step count is rounded up to a
    /// multiple of the stride so the final time is always stored.
    std::size_t stride = 1;
};

/// min(1e-3, T / 1e4).
double default_step(double t_final);

/// Number of uniform steps used for [0, t_final] at nominal step `dt`;
/// the actual step is t_final / steps.
std::size_t step_count(double t_final, double dt);

/// Classical fourth-order Runge-Kutta for d|psi>/dt = -i H |psi>. No
/// renormalisation is ever applied.
Trajectory propagate(const OperatorMatrix& h, const StateVector& psi0, double t_final, double dt,
                     PropagationOptions options = {});

/// exp(-i H t)|psi0> for a 2x2 generator, in closed form.
StateVector exact_propagate_2level(const OperatorMatrix& h, const StateVector& psi0, double t);

/// exp(-i H t) for a 2x2 generator.
CMatrix exact_evolution_2level(const OperatorMatrix& h, double t);

namespace detail {

void require_finite(const CVector& v, double t);

/// Matrix-free RK4 on a uniform grid. Shared by the dense path and the
/// structured bath generator.
template <LinearOperator Op>
Trajectory rk4_trajectory(const Op& h, const StateVector& psi0, double t_final, double dt,
                          PropagationOptions options) {
    const std::size_t stride = options.stride == 0 ? 1 : options.stride;
    // Round up to a whole number of strides so the stored grid stays uniform.
    const std::size_t steps = (step_count(t_final, dt) + stride - 1) / stride * stride;
    const double step = steps == 0 ? 0.0 : t_final / static_cast<double>(steps);

    Trajectory traj;
    traj.times.reserve(steps / stride + 2);
    traj.states.reserve(steps / stride + 2);
    traj.times.push_back(0.0);
    traj.states.push_back(psi0);

    const Eigen::Index n = static_cast<Eigen::Index>(psi0.dimension());
    CVector y = psi0.amplitudes();
    CVector k1(n), k2(n), k3(n), k4(n), tmp(n);
    const Complex a = -kI * step;

    for (std::size_t s = 1; s <= steps; ++s) {
        h.apply(y, k1);
        k1 *= a;
        tmp = y + 0.5 * k1;
        h.apply(tmp, k2);
        k2 *= a;
        tmp = y + 0.5 * k2;
        h.apply(tmp, k3);
        k3 *= a;
        tmp = y + k3;
        h.apply(tmp, k4);
        k4 *= a;
        y += (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;

        if (s % stride == 0) {
            const double t = static_cast<double>(s) * step;
            require_finite(y, t);
            traj.times.push_back(t);
            traj.states.emplace_back(psi0.basis(), y);
        }
    }
    return traj;
}

}  // namespace detail

}  // namespace jointphase
