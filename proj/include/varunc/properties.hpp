#pragma once

// Randomized invariant checks for every module. Each check reports the worst
// residual it saw against a fixed threshold; cmd_verify prints them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "varunc/feedback.hpp"
#include "varunc/general_state.hpp"
#include "varunc/random.hpp"
#include "varunc/relations.hpp"
#include "varunc/tightness.hpp"

namespace varunc::properties {

struct Result {
    std::string module;
    std::string name;
    std::size_t samples = 0;
    double max_residual = 0.0;
    double threshold = 0.0;

    bool passed() const { return std::isfinite(max_residual) && max_residual <= threshold; }
};

struct Config {
    /// Overrides every randomized sample count when set.
    std::optional<std::size_t> samples;
    std::uint64_t seed = 0;

    std::size_t count(std::size_t fallback) const { return samples.value_or(fallback); }
};

namespace detail {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline Mat2 random_hermitian(Engine& rng) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    Mat2 m;
    m(0, 0) = u(rng);
    m(1, 1) = u(rng);
    m(0, 1) = cplx(u(rng), u(rng));
    m(1, 0) = std::conj(m(0, 1));
    return m;
}

inline QubitState any_state(Engine& rng) {
    std::bernoulli_distribution coin(0.5);
    return random_qubit_state(rng, coin(rng) ? StateKind::pure : StateKind::mixed);
}

}  // namespace detail

// ---------------------------------------------------------------- qubit core

inline Result bloch_round_trip(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 1));
    Result r{"qubit_core", "bloch vector round trip through the density matrix", cfg.count(10000), 0, 1e-12};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const QubitState s = random_qubit_state(rng, StateKind::mixed);
        const BlochVector back = matrix_to_bloch(s.matrix());
        r.max_residual = std::max(r.max_residual, (back.vec() - s.bloch().vec()).cwiseAbs().maxCoeff());
    }
    return r;
}

inline Result observable_round_trip(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 2));
    Result r{"qubit_core", "observable Pauli decomposition round trip", cfg.count(10000), 0, 1e-12};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const Mat2 m = detail::random_hermitian(rng);
        r.max_residual = std::max(r.max_residual, varunc::detail::max_abs(decompose_observable(m).matrix() - m));
    }
    return r;
}

inline Result variance_shift_invariance(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 3));
    std::uniform_real_distribution<double> shift(-10.0, 10.0);
    Result r{"qubit_core", "variance invariant under A -> A + cI", cfg.count(10000), 0, 1e-12};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const QubitState s = detail::any_state(rng);
        const PauliObservable a = random_observable(rng, -1.0, 1.0);
        const PauliObservable shifted = a + shift(rng) * PauliObservable::identity();
        r.max_residual = std::max(r.max_residual, std::abs(variance(s, shifted) - variance(s, a)));
    }
    return r;
}

inline Result mixedness_closed_form(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 4));
    Result r{"qubit_core", "mixedness 1 - tr(rho^2) equals (1 - |p|^2)/2", cfg.count(10000), 0, 1e-12};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const QubitState s = detail::any_state(rng);
        r.max_residual = std::max(r.max_residual, std::abs(mixedness(s) - closed_form::mixedness(s.bloch())));
    }
    return r;
}

inline Result bloch_closed_forms(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 5));
    Result r{"qubit_core", "Bloch closed forms of variances, commutator and squared covariance",
             cfg.count(10000), 0, 1e-12};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const QubitState s = detail::any_state(rng);
        const PauliObservable a = random_observable(rng, -1.0, 1.0);
        const PauliObservable b = random_observable(rng, -1.0, 1.0);
        const BlochVector& p = s.bloch();
        for (const double d : {variance(s, a) - closed_form::variance(p, a),
                               variance(s, b) - closed_form::variance(p, b),
                               commutator_term(s, a, b) - closed_form::commutator_term(p, a, b),
                               anticommutator_term(s, a, b) - closed_form::anticommutator_term(p, a, b)}) {
            r.max_residual = std::max(r.max_residual, std::abs(d));
        }
    }
    return r;
}

inline Result trace_identities(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 6));
    Result r{"qubit_core", "trace identities tr(A^2), tr(A), tr(AB) in Pauli coefficients",
             cfg.count(10000), 0, 1e-12};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const PauliObservable a = random_observable(rng, -1.0, 1.0);
        const PauliObservable b = random_observable(rng, -1.0, 1.0);
        const Mat2 ma = a.matrix();
        const Mat2 mb = b.matrix();
        for (const double d : {(ma * ma).trace().real() - closed_form::trace_square(a),
                               (mb * mb).trace().real() - closed_form::trace_square(b),
                               ma.trace().real() - closed_form::trace(a),
                               mb.trace().real() - closed_form::trace(b),
                               (ma * mb).trace().real() - closed_form::trace_product(a, b),
                               xi(a, b) - closed_form::xi(a, b)}) {
            r.max_residual = std::max(r.max_residual, std::abs(d));
        }
    }
    return r;
}

inline Result mixedness_convexity(const Config& cfg, std::size_t d) {
    Engine rng(task_seed(cfg.seed, 10 + d));
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    Result r{"qubit_core", "mixedness convexity, d = " + std::to_string(d), cfg.count(10000), 0, 1e-12};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const GeneralState a = random_density_matrix(rng, d);
        const GeneralState b = random_density_matrix(rng, d);
        const double x = weight(rng);
        const double gap = mixedness_general(GeneralState::mixture(x, a, b)) -
                           (x * mixedness_general(a) + (1.0 - x) * mixedness_general(b));
        r.max_residual = std::max(r.max_residual, -gap);
    }
    return r;
}

inline Result gram_nonnegativity(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 7));
    Result r{"qubit_core", "xi Gram determinant is non-negative", cfg.count(10000), 0, 1e-12};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const PauliObservable a = random_observable(rng);
        const PauliObservable b = random_observable(rng);
        r.max_residual = std::max(r.max_residual, -xi_gram(a, b));
    }
    return r;
}

// ----------------------------------------------------------------- relations

inline Result equality_residual(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 20));
    Result r{"relations", "variance equality residual, coefficients in [-5, 5]", cfg.count(100000), 0, 1e-10};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const QubitState s = detail::any_state(rng);
        const PauliObservable a = random_observable(rng);
        const PauliObservable b = random_observable(rng);
        r.max_residual = std::max(r.max_residual, std::abs(check_equality(s, a, b)));
    }
    return r;
}

inline Result bound_chain(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 21));
    Result r{"relations", "product >= Schroedinger bound >= Robertson bound; product >= eq19 bound",
             cfg.count(10000), 0, 1e-10};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const QubitState s = detail::any_state(rng);
        const RelationReport rep = relation_report(s, random_observable(rng), random_observable(rng));
        r.max_residual = std::max({r.max_residual, rep.sur_bound - rep.product,
                                   rep.rur_bound - rep.sur_bound, rep.eq19_bound - rep.product});
    }
    return r;
}

inline Result remainder_sign(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 22));
    Result r{"relations", "remainder >= 0, and = 0 on pure states", cfg.count(10000), 0, 1e-12};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const PauliObservable a = random_observable(rng, -1.0, 1.0);
        const PauliObservable b = random_observable(rng, -1.0, 1.0);
        const QubitState mixed = random_qubit_state(rng, StateKind::mixed);
        const QubitState pure = random_qubit_state(rng, StateKind::pure);
        r.max_residual = std::max({r.max_residual, -equality_remainder(mixed, a, b),
                                   std::abs(equality_remainder(pure, a, b))});
    }
    return r;
}

inline Result pure_state_degeneration(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 23));
    Result r{"relations", "pure states saturate the Schroedinger bound", cfg.count(10000), 0, 1e-10};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const QubitState s = random_qubit_state(rng, StateKind::pure);
        const PauliObservable a = random_observable(rng);
        const PauliObservable b = random_observable(rng);
        r.max_residual = std::max(r.max_residual,
                                  std::abs(variance(s, a) * variance(s, b) - sur_bound(s, a, b)));
    }
    return r;
}

inline Result estimator_pair_independence(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 24));
    Result r{"relations", "mixedness estimate is exact and independent of the observable pair",
             cfg.count(10000), 0, 1e-10};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const QubitState s = detail::any_state(rng);
        const PauliObservable a1 = random_observable(rng), b1 = random_observable(rng);
        const PauliObservable a2 = random_observable(rng), b2 = random_observable(rng);
        if (xi_gram(a1, b1) <= 1.0 || xi_gram(a2, b2) <= 1.0) continue;
        const double e1 = estimate_mixedness(s, a1, b1);
        const double e2 = estimate_mixedness(s, a2, b2);
        r.max_residual = std::max({r.max_residual, std::abs(e1 - e2), std::abs(e1 - mixedness(s))});
    }
    return r;
}

/// |log10(SE(1e4) / SE(1e6)) - 1|, which must stay within log10(2).
inline Result estimator_error_scaling(const Config& cfg) {
    Result r{"relations", "shot-estimator standard error scales as shots^-1/2", 0, 0, std::log10(2.0)};
    const QubitState s(BlochVector{0.3, -0.2, 0.4});
    const PauliObservable a = PauliObservable::sigma_x();
    const PauliObservable b = PauliObservable::sigma_z() + 0.5 * PauliObservable::sigma_y();
    const std::size_t trials = std::clamp<std::size_t>(cfg.count(5), 1, 20);
    for (std::size_t k = 0; k < trials; ++k) {
        const std::uint64_t seed = task_seed(cfg.seed, 100 * k);
        const double small = estimate_mixedness_from_counts(simulate_estimator_counts(s, a, b, 10000, seed)).std_error;
        const double large =
            estimate_mixedness_from_counts(simulate_estimator_counts(s, a, b, 1000000, seed + 10)).std_error;
        r.max_residual = std::max(r.max_residual, std::abs(std::log10(small / large) - 1.0));
        ++r.samples;
    }
    return r;
}

inline Result eur_sigma_x_sigma_z(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 25));
    Result r{"relations", "entropic relation H(sx) + H(sz) >= 1", cfg.count(10000), 0, 1e-10};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const QubitState s = detail::any_state(rng);
        const EurResult e = eur_check(s, PauliObservable::sigma_x(), PauliObservable::sigma_z());
        r.max_residual = std::max({r.max_residual, e.bound - e.entropy_sum, 1.0 - e.entropy_sum});
    }
    return r;
}

inline Result sum_relation_holds(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 26));
    Result r{"relations", "Var(A) + Var(B) >= Var(A + B)/2", cfg.count(100000), 0, 1e-10};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const SumRelation sr = sum_relation(detail::any_state(rng), random_observable(rng), random_observable(rng));
        r.max_residual = std::max(r.max_residual, sr.bound - sr.lhs);
    }
    return r;
}

// -------------------------------------------------------------- feedback_sim

inline Result rhs_traceless(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 30));
    std::uniform_real_distribution<double> lam(0.0, 1.0), om(0.0, 2.0);
    Result r{"feedback_sim", "master equation generator is traceless", cfg.count(10000), 0, 1e-12};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const QubitState s = detail::any_state(rng);
        const FeedbackParams p{om(rng), lam(rng), 0.0};
        r.max_residual = std::max(r.max_residual, std::abs(master_rhs(s.matrix(), p).trace()));
    }
    return r;
}

inline Result analytic_solves_master_equation(const Config&) {
    Result r{"feedback_sim", "closed-form state satisfies the master equation (finite differences)", 0, 0, 1e-5};
    const double delta = 1e-6;
    for (int i = 0; i <= 6; ++i) {
        for (int j = 0; j <= 4; ++j) {
            for (int k = 0; k <= 5; ++k) {
                const FeedbackParams p{0.0, 0.1 + 0.9 * j / 4.0, std::numbers::pi * i / 6.0};
                const double t = k;
                const auto rho = [&](double at) { return analytic_state(p, at).matrix(); };
                const Mat2 derivative = t >= delta
                    ? Mat2((rho(t + delta) - rho(t - delta)) / (2.0 * delta))
                    : Mat2((-3.0 * rho(t) + 4.0 * rho(t + delta) - rho(t + 2.0 * delta)) / (2.0 * delta));
                r.max_residual = std::max(r.max_residual, varunc::detail::max_abs(derivative - master_rhs(rho(t), p)));
                ++r.samples;
            }
        }
    }
    return r;
}

inline Result lambda_zero_reduction(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 31));
    std::uniform_real_distribution<double> om(0.0, 5.0);
    Result r{"feedback_sim", "feedback equation at lambda = 0 equals the bare driven decay", cfg.count(10000), 0, 1e-12};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const Mat2 rho = detail::any_state(rng).matrix();
        const double omega = om(rng);
        r.max_residual = std::max(r.max_residual,
                                  varunc::detail::max_abs(master_rhs(rho, {omega, 0.0, 0.0}) - bare_rhs(rho, omega)));
    }
    return r;
}

inline double max_deviation_from_analytic(const FeedbackParams& p, double t_end, double h) {
    const Trajectory traj = integrate(p, t_end, h);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        worst = std::max(worst, varunc::detail::max_abs(traj.states[k].matrix() -
                                                analytic_state(p, traj.times[k]).matrix()));
    }
    return worst;
}

/// |log2(err(h) / err(h/2)) - 4| at h = 1e-2, where truncation error dominates
/// rounding; the admitted ratio band [8, 32] is a distance of 1 in log2.
inline Result rk4_order(const Config&) {
    Result r{"feedback_sim", "RK4 convergence order (error ratio on halving h in [8, 32])", 0, 0, 1.0};
    for (const double lambda : {0.2, 0.6, 1.0}) {
        for (const double alpha : {0.3, std::numbers::pi / 4.0, 1.2}) {
            const FeedbackParams p{0.0, lambda, alpha};
            const double ratio = max_deviation_from_analytic(p, 5.0, 1e-2) / max_deviation_from_analytic(p, 5.0, 5e-3);
            r.max_residual = std::max(r.max_residual, std::abs(std::log2(ratio) - 4.0));
            ++r.samples;
        }
    }
    return r;
}

inline Result trajectory_positivity(const Config&) {
    Result r{"feedback_sim", "minimum eigenvalue along trajectories >= -1e-8", 0, 0, 1e-8};
    for (const double omega : {0.0, 0.5, 2.0}) {
        for (const double lambda : {0.0, 0.5, 1.0}) {
            for (const double alpha : {0.0, std::numbers::pi / 4.0, std::numbers::pi / 2.0, 2.5}) {
                const Trajectory traj = integrate({omega, lambda, alpha}, 5.0, 1e-3);
                r.max_residual = std::max(r.max_residual, -traj.min_eigenvalue);
                ++r.samples;
            }
        }
    }
    return r;
}

inline Result trajectory_starts_pure(const Config&) {
    Result r{"feedback_sim", "mixedness along the trajectory starts at 0", 0, 0, 1e-12};
    for (int i = 0; i <= 8; ++i) {
        for (const double lambda : {0.0, 0.25, 0.5, 1.0}) {
            const FeedbackParams p{0.0, lambda, std::numbers::pi * i / 8.0};
            const Trajectory traj = integrate(p, 0.1, 1e-2);
            r.max_residual = std::max({r.max_residual, std::abs(mixedness(traj.states.front())),
                                       std::abs(mixedness(analytic_state(p, 0.0)))});
            ++r.samples;
        }
    }
    return r;
}

// ----------------------------------------------------------------- tightness

inline Result ti1_identity(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 40));
    Result r{"tightness", "Ti1 = 1 + anticommutator term / bound", cfg.count(10000), 0, 1e-10};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const QubitState s = detail::any_state(rng);
        const PauliObservable a = random_observable(rng, -1.0, 1.0);
        const PauliObservable b = random_observable(rng, -1.0, 1.0);
        const auto value = ti1(s, a, b);
        if (!value) continue;
        const double expected = 1.0 + anticommutator_term(s, a, b) / eq19_bound(s, a, b);
        r.max_residual = std::max(r.max_residual, detail::rel(*value, expected));
    }
    return r;
}

inline Result ratios_at_least_one(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 41));
    Result r{"tightness", "Ti1, Ti2, Ti3 >= 1 wherever defined", cfg.count(10000), 0, 1e-9};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const QubitState s = detail::any_state(rng);
        const PauliObservable a = random_observable(rng, -1.0, 1.0);
        const PauliObservable b = random_observable(rng, -1.0, 1.0);
        for (const auto& v : {ti1(s, a, b), ti2(s, a, b), ti3(s, a, b)}) {
            if (v) r.max_residual = std::max(r.max_residual, 1.0 - *v);
        }
    }
    return r;
}

inline Result closed_form_ti1_agreement(const Config&) {
    Result r{"tightness", "both closed-form Ti1 expressions match the state pipeline", 0, 0, 1e-9};
    const PauliObservable x = PauliObservable::sigma_x(), z = PauliObservable::sigma_z();
    const std::size_t n = 50;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            const double t = 3.0 * j / n;
            const double alpha = std::numbers::pi * i / (n + 1);
            const double lambda = static_cast<double>(i) / n;
            const auto a = ti1(analytic_state({0.0, 1.0, alpha}, t), x, z);
            const auto b = ti1(analytic_state({0.0, lambda, std::numbers::pi / 4.0}, t), x, z);
            const double da = a ? std::abs(ti1_analytic_lambda1(alpha, t) - *a) : INFINITY;
            const double db = b ? std::abs(ti1_analytic_alpha_pi4(lambda, t) - *b) : INFINITY;
            r.max_residual = std::max({r.max_residual, da, db});
            r.samples += 2;
        }
    }
    r.max_residual = std::max(r.max_residual,
                              std::abs(ti1_analytic_lambda1(std::numbers::pi / 4.0, 1.0) -
                                       ti1_analytic_alpha_pi4(1.0, 1.0)));
    return r;
}

inline Result ti1_scale_shift_invariance(const Config& cfg) {
    Engine rng(task_seed(cfg.seed, 42));
    std::uniform_real_distribution<double> scale(0.2, 3.0), shift(-5.0, 5.0);
    std::bernoulli_distribution sign(0.5);
    Result r{"tightness", "Ti1 invariant under A -> cA and A -> A + dI", cfg.count(10000), 0, 1e-10};
    for (std::size_t k = 0; k < r.samples; ++k) {
        const QubitState s = random_qubit_state(rng, StateKind::mixed);
        const PauliObservable a = random_observable(rng, -1.0, 1.0);
        const PauliObservable b = random_observable(rng, -1.0, 1.0);
        const double c = sign(rng) ? scale(rng) : -scale(rng);
        const auto base = ti1(s, a, b);
        const auto scaled = ti1(s, c * a, b);
        const auto shifted = ti1(s, a, b + shift(rng) * PauliObservable::identity());
        if (!base || !scaled || !shifted) continue;
        r.max_residual = std::max({r.max_residual, detail::rel(*scaled, *base), detail::rel(*shifted, *base)});
    }
    return r;
}

/// Every library-level invariant, in module order.
inline std::vector<Result> run_all(const Config& cfg) {
    std::vector<Result> out;
    out.push_back(bloch_round_trip(cfg));
    out.push_back(observable_round_trip(cfg));
    out.push_back(variance_shift_invariance(cfg));
    out.push_back(mixedness_closed_form(cfg));
    out.push_back(bloch_closed_forms(cfg));
    out.push_back(trace_identities(cfg));
    for (const std::size_t d : {2u, 3u, 4u}) out.push_back(mixedness_convexity(cfg, d));
    out.push_back(gram_nonnegativity(cfg));

    out.push_back(equality_residual(cfg));
    out.push_back(bound_chain(cfg));
    out.push_back(remainder_sign(cfg));
    out.push_back(pure_state_degeneration(cfg));
    out.push_back(estimator_pair_independence(cfg));
    out.push_back(estimator_error_scaling(cfg));
    out.push_back(eur_sigma_x_sigma_z(cfg));
    out.push_back(sum_relation_holds(cfg));

    out.push_back(rhs_traceless(cfg));
    out.push_back(analytic_solves_master_equation(cfg));
    out.push_back(lambda_zero_reduction(cfg));
    out.push_back(rk4_order(cfg));
    out.push_back(trajectory_positivity(cfg));
    out.push_back(trajectory_starts_pure(cfg));

    out.push_back(ti1_identity(cfg));
    out.push_back(ratios_at_least_one(cfg));
    out.push_back(closed_form_ti1_agreement(cfg));
    out.push_back(ti1_scale_shift_invariance(cfg));
    return out;
}

}  // namespace varunc::properties
