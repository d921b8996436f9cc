#pragma once

// Damped qubit under homodyne-mediated feedback F = lambda * sigma_x.
//
//   drho/dt = -i[Omega sigma_x + (sigma_+ F + F sigma_-)/2, rho] + D(sigma_- - iF) rho
//
// with the effective damping rate fixed to 1. Populations and coherences
// are reported in the excited-first convention used by the closed-form
// solution: rho11 = <1|rho|1>, rho12 = <1|rho|0>.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "varunc/qubit.hpp"

namespace varunc {

struct FeedbackParams {
    double omega = 0.0;      ///< Rabi frequency, units of the damping rate
    double lambda = 0.0;     ///< feedback strength
    double alpha = 0.0;      ///< initial state cos(alpha)|0> + sin(alpha)|1>
    double gamma_eff = 1.0;  ///< effective damping g^2/kappa; normalized to 1

    void validate() const {
        if (!std::isfinite(omega) || omega < 0.0) {
            throw error(errc::invalid_params, "omega must be finite and >= 0");
        }
        if (!std::isfinite(lambda) || lambda < 0.0) {
            throw error(errc::invalid_params, "lambda must be finite and >= 0");
        }
        if (!std::isfinite(alpha)) throw error(errc::invalid_params, "alpha must be finite");
        if (gamma_eff != 1.0) throw error(errc::invalid_params, "gamma_eff is normalized to 1");
    }

    void require_undriven() const {
        validate();
        if (omega != 0.0) {
            throw error(errc::invalid_params, "closed-form dynamics need omega = 0");
        }
    }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<QubitState> states;
    /// Smallest eigenvalue of the raw integrator state, before the
    /// stored copy is projected into the Bloch ball.
    double min_eigenvalue = 1.0;

    std::size_t size() const { return times.size(); }
};

/// D(O) rho = O rho O^dagger - (O^dagger O rho + rho O^dagger O) / 2
inline Mat2 dissipator(const Mat2& op, const Mat2& rho) {
    const Mat2 op_dag = op.adjoint();
    const Mat2 n = op_dag * op;
    return op * rho * op_dag - 0.5 * (n * rho + rho * n);
}

inline Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }

/// Right-hand side of the feedback master equation.
inline Mat2 master_rhs(const Mat2& rho, const FeedbackParams& p) {
    const cplx i(0.0, 1.0);
    const Mat2 f = p.lambda * pauli::x();
    const Mat2 h = p.omega * pauli::x() + 0.5 * (pauli::raising() * f + f * pauli::lowering());
    return -i * commutator(h, rho) + dissipator(pauli::lowering() - i * f, rho);
}

/// Driven decay without feedback: -i[Omega sigma_x, rho] + D(sigma_-) rho.
inline Mat2 bare_rhs(const Mat2& rho, double omega) {
    const cplx i(0.0, 1.0);
    return -i * commutator(omega * pauli::x(), rho) + dissipator(pauli::lowering(), rho);
}

/// Pure initial state cos(alpha)|0> + sin(alpha)|1>.
inline QubitState initial_state(double alpha) {
    return QubitState(BlochVector{std::sin(2.0 * alpha), 0.0, std::cos(2.0 * alpha)});
}

namespace detail {

/// Builds a state from excited population and coherence <1|rho|0>.
inline QubitState from_elements(double rho11, cplx rho12) {
    return QubitState(BlochVector{2.0 * rho12.real(), 2.0 * rho12.imag(), 1.0 - 2.0 * rho11});
}

/// Hermitian, unit-trace part of m projected into the Bloch ball.
inline QubitState sanitize(const Mat2& m) {
    const Mat2 h = 0.5 * (m + m.adjoint());
    const double trace = h.trace().real();
    const Mat2 n = h / trace;
    Vec3 p{2.0 * n(1, 0).real(), 2.0 * n(1, 0).imag(), (n(0, 0) - n(1, 1)).real()};
    const double norm = p.norm();
    if (norm > 1.0) p /= norm;
    return QubitState(BlochVector::from(p));
}

}  // namespace detail

/// Closed-form state at time t for omega = 0. For lambda <= 1e-6 the
/// coherence uses its lambda -> 0 limit exp(-t/2) sin(2 alpha)/2.
inline QubitState analytic_state(const FeedbackParams& p, double t) {
    p.require_undriven();
    if (!(t >= 0.0)) throw error(errc::negative_time, "t must be >= 0");
    const double l2 = p.lambda * p.lambda;
    const double k = 1.0 + 2.0 * l2;
    const double c2a = std::cos(2.0 * p.alpha);
    const double s2a = std::sin(2.0 * p.alpha);

    // e^{-kt}[1 + 2 e^{kt} lambda^2 - k cos 2a] / (2k), expanded to avoid overflow.
    const double rho11 = (std::exp(-k * t) * (1.0 - k * c2a) + 2.0 * l2) / (2.0 * k);

    cplx rho12;
    const double decay = std::exp(-0.5 * t);
    if (p.lambda <= 1e-6) {
        rho12 = decay * s2a / 2.0;
    } else {
        // (-i + i e^{-2 t lambda^2} + lambda) / (2 lambda)
        rho12 = decay * s2a * cplx(0.5, std::expm1(-2.0 * t * l2) / (2.0 * p.lambda));
    }
    return detail::from_elements(rho11, rho12);
}

/// Long-time limit for omega = 0: diagonal with rho11 = lambda^2/(1 + 2 lambda^2).
/// lambda = 0 gives the ground state, the endpoint of pure decay.
inline QubitState steady_state(const FeedbackParams& p) {
    p.require_undriven();
    const double l2 = p.lambda * p.lambda;
    return detail::from_elements(l2 / (1.0 + 2.0 * l2), 0.0);
}

inline constexpr double max_rk4_step = 1e-2;
inline constexpr double positivity_guard = 1e-6;

namespace detail {

inline Mat2 rk4_step(const Mat2& rho, const FeedbackParams& p, double h) {
    const Mat2 k1 = master_rhs(rho, p);
    const Mat2 k2 = master_rhs(rho + 0.5 * h * k1, p);
    const Mat2 k3 = master_rhs(rho + 0.5 * h * k2, p);
    const Mat2 k4 = master_rhs(rho + h * k3, p);
    return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Hermitize and renormalize; fails if the step destroyed positivity.
inline Mat2 hygiene(const Mat2& rho, double* min_eigenvalue = nullptr) {
    Mat2 h = 0.5 * (rho + rho.adjoint());
    h /= h.trace().real();
    const double lowest = hermitian_eigenvalues(h)[0];
    if (min_eigenvalue != nullptr) *min_eigenvalue = std::min(*min_eigenvalue, lowest);
    if (!(lowest >= -positivity_guard)) {
        throw error(errc::positivity_lost, "eigenvalue below -1e-6; integration unstable");
    }
    return h;
}

inline void check_step(double h) {
    if (!(h > 0.0) || h > max_rk4_step) {
        throw error(errc::step_too_large, "step must lie in (0, 1e-2]");
    }
}

}  // namespace detail

/// States at each requested time (non-decreasing, >= 0), integrating from
/// the pure initial state with classical RK4 and steps no longer than h.
inline std::vector<QubitState> integrate_at(const FeedbackParams& p, std::span<const double> times,
                                            double h) {
    p.validate();
    detail::check_step(h);
    std::vector<QubitState> out;
    out.reserve(times.size());
    Mat2 rho = initial_state(p.alpha).matrix();
    double now = 0.0;
    for (const double target : times) {
        if (!(target >= now)) throw error(errc::negative_time, "sample times must be non-decreasing and >= 0");
        const double span = target - now;
        const auto steps = static_cast<long>(std::ceil(span / h - 1e-9));
        if (steps > 0) {
            const double dt = span / static_cast<double>(steps);
            for (long k = 0; k < steps; ++k) rho = detail::hygiene(detail::rk4_step(rho, p, dt));
        }
        now = target;
        out.push_back(detail::sanitize(rho));
    }
    return out;
}

/// Uniform grid 0, dt, ..., t_end with the largest dt <= h that lands on t_end.
inline std::vector<double> time_grid(double t_end, double h) {
    detail::check_step(h);
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw error(errc::non_positive_time, "t_end must be positive");
    }
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
    const double dt = t_end / static_cast<double>(steps);
    std::vector<double> times(steps + 1);
    for (std::size_t k = 0; k < steps; ++k) times[k] = static_cast<double>(k) * dt;
    times[steps] = t_end;
    return times;
}

/// Fixed-step RK4 trajectory on time_grid(t_end, h), starting from the pure
/// initial state. Each step is re-hermitized and renormalized.
inline Trajectory integrate(const FeedbackParams& p, double t_end, double h) {
    p.validate();
    Trajectory traj;
    traj.times = time_grid(t_end, h);
    traj.states.reserve(traj.times.size());
    Mat2 rho = initial_state(p.alpha).matrix();
    traj.states.push_back(detail::sanitize(rho));
    traj.min_eigenvalue = detail::hermitian_eigenvalues(rho)[0];
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
        const double dt = traj.times[k] - traj.times[k - 1];
        rho = detail::hygiene(detail::rk4_step(rho, p, dt), &traj.min_eigenvalue);
        traj.states.push_back(detail::sanitize(rho));
    }
    return traj;
}

}  // namespace varunc
