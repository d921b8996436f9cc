#pragma once

// Tightness ratios (left side over lower bound) of the variance-product,
// entropic and sum relations, their closed forms along the feedback
// dynamics, and grid sweeps over (alpha, lambda, t).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "varunc/feedback.hpp"
#include "varunc/relations.hpp"

namespace varunc {

/// Var(A)Var(B) over the commutator-plus-mixedness bound.
inline std::optional<double> ti1(const QubitState& s, const PauliObservable& a,
                                 const PauliObservable& b) {
    const double bound = eq19_bound(s, a, b);
    if (bound <= tol::zero_bound) return std::nullopt;
    return variance(s, a) * variance(s, b) / bound;
}

/// (H(A) + H(B)) / log2(1/c); undefined when the eigenbases coincide.
inline std::optional<double> ti2(const QubitState& s, const PauliObservable& a,
                                 const PauliObservable& b) {
    const EurResult eur = eur_check(s, a, b);
    if (eur.zero_bound) return std::nullopt;
    return eur.entropy_sum / eur.bound;
}

/// (Var(A) + Var(B)) / (Var(A + B) / 2)
inline std::optional<double> ti3(const QubitState& s, const PauliObservable& a,
                                 const PauliObservable& b) {
    const SumRelation sum = sum_relation(s, a, b);
    if (sum.bound <= tol::zero_bound) return std::nullopt;
    return sum.lhs / sum.bound;
}

/// Closed-form Ti1 for A = sigma_x, B = sigma_z, lambda = 1.
inline double ti1_analytic_lambda1(double alpha, double t) {
    if (!(t > 0.0)) throw error(errc::non_positive_time, "t must be positive");
    const double c = std::cos(2.0 * alpha);
    const double s = std::sin(2.0 * alpha);
    const double num = std::pow(-1.0 + std::exp(3.0 * t) + 3.0 * c, 2) * s * s;
    const double den = 8.0 * std::exp(7.0 * t) - std::exp(t) * std::pow(1.0 - 3.0 * c, 2) -
                       2.0 * std::exp(4.0 * t) * (3.0 * c - 1.0) - 9.0 * std::exp(6.0 * t) * s * s;
    return 1.0 + num / den;
}

/// Closed-form Ti1 for A = sigma_x, B = sigma_z, initial state (|0> + |1>)/sqrt 2.
inline double ti1_analytic_alpha_pi4(double lambda, double t) {
    if (!(t > 0.0)) throw error(errc::non_positive_time, "t must be positive");
    if (!(lambda > 0.0)) throw error(errc::non_positive_lambda, "lambda must be positive");
    const double l2 = lambda * lambda;
    const double e = std::exp(t + 2.0 * t * l2);
    const double num = (1.0 - std::exp(-t)) * (1.0 + 2.0 * e * l2) * (2.0 * e * (1.0 + l2) - 1.0);
    const double den =
        e * (2.0 + std::exp(2.0 * t * l2) * (4.0 * l2 * (std::exp(t) - 1.0) * (l2 + 1.0) - 1.0)) - 1.0;
    return num / den;
}

struct TightnessPoint {
    double alpha = 0.0;
    double lambda = 0.0;
    double t = 0.0;
    std::optional<double> ti1;
    std::optional<double> ti2;
    std::optional<double> ti3;
};

/// Inclusive linear range. steps = 1 pins the axis to lo (and requires lo == hi).
struct Range {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t steps = 1;

    static Range fixed(double v) { return {v, v, 1}; }

    double at(std::size_t k) const {
        if (steps == 1) return lo;
        if (k + 1 == steps) return hi;
        return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
    }

    void validate(const char* name) const {
        const std::string axis(name);
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            throw error(errc::invalid_grid, axis + " bounds must be finite");
        }
        if (steps == 0) throw error(errc::invalid_grid, axis + " needs at least one step");
        if (steps == 1 && lo != hi) throw error(errc::invalid_grid, axis + " with one step needs lo == hi");
        if (steps >= 2 && !(lo < hi)) throw error(errc::invalid_grid, axis + " needs lo < hi");
    }
};

enum class DynamicsSource { analytic, numeric };

struct SweepGrid {
    Range alpha = Range::fixed(std::numbers::pi / 4.0);
    Range lambda = Range::fixed(1.0);
    Range t = {0.06, 3.0, 50};
    PauliObservable a = PauliObservable::sigma_x();
    PauliObservable b = PauliObservable::sigma_z();
    double omega = 0.0;   ///< numeric source only
    double step = 1e-3;   ///< RK4 step, numeric source only

    std::size_t size() const { return alpha.steps * lambda.steps * t.steps; }

    void validate() const {
        alpha.validate("alpha");
        lambda.validate("lambda");
        t.validate("t");
        if (t.lo < 0.0) throw error(errc::invalid_grid, "t must be >= 0");
        if (lambda.lo < 0.0) throw error(errc::invalid_grid, "lambda must be >= 0");
    }

    /// Ti1 over (alpha, t) at lambda = 1 with alpha strictly inside (0, pi)
    /// and t in (0, 3].
    static SweepGrid fig2(std::size_t steps) {
        SweepGrid g;
        const double n = static_cast<double>(steps);
        g.alpha = {std::numbers::pi / (n + 1.0), std::numbers::pi * n / (n + 1.0), steps};
        g.lambda = Range::fixed(1.0);
        g.t = {3.0 / n, 3.0, steps};
        return g;
    }

    /// Ti1 over (lambda, t) at alpha = pi/4 with lambda in (0, 1] and t in (0, 3].
    static SweepGrid fig3(std::size_t steps) {
        SweepGrid g;
        const double n = static_cast<double>(steps);
        g.alpha = Range::fixed(std::numbers::pi / 4.0);
        g.lambda = {1.0 / n, 1.0, steps};
        g.t = {3.0 / n, 3.0, steps};
        return g;
    }
};

inline TightnessPoint evaluate_point(const QubitState& s, const PauliObservable& a,
                                     const PauliObservable& b, double alpha, double lambda,
                                     double t) {
    TightnessPoint pt{alpha, lambda, t, ti1(s, a, b), std::nullopt, ti3(s, a, b)};
    if (!a.is_scalar() && !b.is_scalar()) pt.ti2 = ti2(s, a, b);
    return pt;
}

/// Tightness at every grid point, row-major: alpha outermost, then lambda, then t.
inline std::vector<TightnessPoint> sweep(const SweepGrid& grid, DynamicsSource source) {
    grid.validate();
    if (source == DynamicsSource::analytic && grid.omega != 0.0) {
        throw error(errc::invalid_params, "analytic source needs omega = 0");
    }
    std::vector<double> times(grid.t.steps);
    for (std::size_t k = 0; k < times.size(); ++k) times[k] = grid.t.at(k);

    std::vector<TightnessPoint> out;
    out.reserve(grid.size());
    for (std::size_t i = 0; i < grid.alpha.steps; ++i) {
        for (std::size_t j = 0; j < grid.lambda.steps; ++j) {
            const FeedbackParams params{grid.omega, grid.lambda.at(j), grid.alpha.at(i)};
            std::vector<QubitState> states;
            if (source == DynamicsSource::numeric) {
                states = integrate_at(params, times, grid.step);
            } else {
                states.reserve(times.size());
                for (const double t : times) states.push_back(analytic_state(params, t));
            }
            for (std::size_t k = 0; k < times.size(); ++k) {
                out.push_back(evaluate_point(states[k], grid.a, grid.b, params.alpha,
                                             params.lambda, times[k]));
            }
        }
    }
    return out;
}

struct OrderingViolations {
    std::size_t compared = 0;    ///< points where Ti1, Ti2 and Ti3 are all defined
    std::size_t over_ti2 = 0;    ///< Ti1 > Ti2 + tolerance
    std::size_t over_ti3 = 0;    ///< Ti1 > Ti3 + tolerance
    double worst_excess = 0.0;   ///< largest positive Ti1 - min(Ti2, Ti3); 0 if none
};

/// Counts points where Ti1 is not the tightest of the three ratios.
inline OrderingViolations count_ordering_violations(const std::vector<TightnessPoint>& points,
                                                    double tolerance = 1e-9) {
    OrderingViolations v;
    for (const auto& pt : points) {
        if (!pt.ti1 || !pt.ti2 || !pt.ti3) continue;
        ++v.compared;
        if (*pt.ti1 > *pt.ti2 + tolerance) ++v.over_ti2;
        if (*pt.ti1 > *pt.ti3 + tolerance) ++v.over_ti3;
        v.worst_excess = std::max(v.worst_excess, *pt.ti1 - std::min(*pt.ti2, *pt.ti3));
    }
    return v;
}

}  // namespace varunc
