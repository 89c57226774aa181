#include "jointphase/phase.hpp"

#include <cmath>
#include <sstream>

namespace jointphase {

namespace {

constexpr double kNormFloor = 1e-30;

}  // namespace

std::string_view to_string(PhaseMethod m) {
    switch (m) {
        case PhaseMethod::JointState: return "joint-state";
        case PhaseMethod::QuantumJump: return "quantum-jump";
    }
    return "unknown";
}

double wrap_phase(double x) {
    double r = std::remainder(x, 2.0 * kPi);  // [-pi, pi]
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

double total_phase(const StateVector& initial, const StateVector& final_state, double overlap_floor) {
    const Complex overlap = inner(initial, final_state);
    if (std::abs(overlap) <= overlap_floor) throw OrthogonalStates(std::abs(overlap), overlap_floor);
    return wrap_phase(std::arg(overlap));
}

double dynamical_phase_joint(const StateVector& psi0, const OperatorMatrix& h_s, double t_final) {
    if (!h_s.is_hermitian()) throw std::invalid_argument("dynamical_phase_joint needs the Hermitian system Hamiltonian");
    if (std::abs(psi0.norm_squared() - 1.0) > 1e-10) throw std::invalid_argument("initial state must be normalised");
    return -expectation(h_s, psi0).real() * t_final;
}

double simpson(std::span<const double> values, double h) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    const std::size_t intervals = n - 1;
    if (intervals == 1) return 0.5 * h * (values[0] + values[1]);

    auto simpson_even = [&](std::size_t first, std::size_t count) {
        double sum = values[first] + values[first + count];
        for (std::size_t i = 1; i < count; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * values[first + i];
        return sum * h / 3.0;
    };

    if (intervals % 2 == 0) return simpson_even(0, intervals);
    // Odd: Simpson over the first (intervals - 3), Simpson 3/8 over the last three.
    const std::size_t head = intervals - 3;
    const double tail = 3.0 * h / 8.0 *
                        (values[head] + 3.0 * values[head + 1] + 3.0 * values[head + 2] + values[head + 3]);
    return (head > 0 ? simpson_even(0, head) : 0.0) + tail;
}

double dynamical_phase_jump(const Trajectory& traj, const OperatorMatrix& h_s) {
    if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
    if (h_s.dimension() != traj.initial().dimension())
        throw std::invalid_argument("Hamiltonian/trajectory dimension mismatch");
    std::vector<double> integrand(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double norm2 = traj.states[k].norm_squared();
        if (!(norm2 > kNormFloor)) {
            std::ostringstream os;
            os << "no-jump norm vanishes at t = " << traj.times[k];
            throw NumericalError(os.str());
        }
        integrand[k] = expectation(h_s, traj.states[k]).real() / norm2;
    }
    return -simpson(integrand, traj.spacing());
}

double unwrapped_total_phase(const Trajectory& traj, double overlap_floor) {
    if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
    const CVector& ref = traj.initial().amplitudes();
    double accumulated = 0.0;
    double last = 0.0;
    bool have_last = false;
    for (const auto& state : traj.states) {
        const Complex overlap = ref.dot(state.amplitudes());
        if (std::abs(overlap) <= overlap_floor) continue;
        const double a = std::arg(overlap);
        if (!have_last) {
            accumulated = a;
        } else {
            double jump = a - last;
            if (jump > kPi) jump -= 2.0 * kPi;
            else if (jump < -kPi) jump += 2.0 * kPi;
            accumulated += jump;
        }
        last = a;
        have_last = true;
    }
    if (!have_last) throw OrthogonalStates(0.0, overlap_floor);
    return accumulated;
}

PhaseReport geometric_phase(const Trajectory& traj, const OperatorMatrix& h_s, PhaseMethod method) {
    if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
    PhaseReport r;
    r.method = method;
    r.total_phase = total_phase(traj.initial(), traj.final_state());
    const double t_final = traj.times.back() - traj.times.front();
    r.dynamical_phase = method == PhaseMethod::JointState ? dynamical_phase_joint(traj.initial(), h_s, t_final)
                                                          : dynamical_phase_jump(traj, h_s);
    r.beta_principal = wrap_phase(r.total_phase - r.dynamical_phase);

    // The continuous total phase agrees with the principal one modulo 2 pi;
    // pin it to the exact endpoint value so the difference is an exact multiple.
    const double continuous = unwrapped_total_phase(traj);
    const double turns = std::round((continuous - r.total_phase) / (2.0 * kPi));
    r.beta_unwrapped = r.total_phase + 2.0 * kPi * turns - r.dynamical_phase;
    r.survival_prob = traj.final_state().norm_squared();
    return r;
}

}  // namespace jointphase
