#pragma once

// Variance, entropic and sum uncertainty relations for one qubit, the
// mixedness equality, and the mixedness estimator built on it.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include "varunc/qubit.hpp"
#include "varunc/random.hpp"

namespace varunc {

/// Robertson bound |<[A,B]>/(2i)|^2.
inline double rur_bound(const QubitState& s, const PauliObservable& a, const PauliObservable& b) {
    return commutator_term(s, a, b);
}

/// Schroedinger bound: commutator term plus squared symmetrized covariance.
inline double sur_bound(const QubitState& s, const PauliObservable& a, const PauliObservable& b) {
    return commutator_term(s, a, b) + anticommutator_term(s, a, b);
}

/// (1/8) M [xi(A,A) xi(B,B) - xi(A,B)^2], the mixedness-weighted remainder.
inline double equality_remainder(const QubitState& s, const PauliObservable& a,
                                 const PauliObservable& b) {
    return 0.125 * mixedness(s) * xi_gram(a, b);
}

/// Residual of the variance equality; zero up to rounding for every input.
inline double check_equality(const QubitState& s, const PauliObservable& a,
                             const PauliObservable& b) {
    return variance(s, a) * variance(s, b) - sur_bound(s, a, b) - equality_remainder(s, a, b);
}

/// Lower bound obtained by dropping the anticommutator term from the equality.
inline double eq19_bound(const QubitState& s, const PauliObservable& a,
                         const PauliObservable& b) {
    return rur_bound(s, a, b) + equality_remainder(s, a, b);
}

struct SumRelation {
    double lhs = 0.0;    ///< Var(A) + Var(B)
    double bound = 0.0;  ///< Var(A + B) / 2
};

inline SumRelation sum_relation(const QubitState& s, const PauliObservable& a,
                                const PauliObservable& b) {
    return {variance(s, a) + variance(s, b), 0.5 * variance(s, a + b)};
}

namespace detail {

inline void require_nondegenerate(const PauliObservable& o) {
    if (o.is_scalar()) {
        throw error(errc::degenerate_spectrum, "observable is proportional to the identity");
    }
}

/// Probabilities of the (lower, upper) eigenvalue outcomes.
inline std::array<double, 2> outcome_probabilities(const QubitState& s, const PauliObservable& o) {
    require_nondegenerate(o);
    const Vec3 n = o.axis().normalized();
    const double upper = std::clamp(0.5 * (1.0 + n.dot(s.bloch().vec())), 0.0, 1.0);
    return {1.0 - upper, upper};
}

inline double binary_entropy(double p) {
    double h = 0.0;
    for (const double q : {p, 1.0 - p}) {
        if (q > 0.0) h -= q * std::log2(q);
    }
    return h;
}

}  // namespace detail

/// Shannon entropy (bits) of the projective measurement of o.
inline double entropy_of_measurement(const QubitState& s, const PauliObservable& o) {
    return detail::binary_entropy(detail::outcome_probabilities(s, o)[1]);
}

/// Maximum squared overlap between eigenvectors of a and b.
inline double complementarity_c(const PauliObservable& a, const PauliObservable& b) {
    detail::require_nondegenerate(a);
    detail::require_nondegenerate(b);
    // |<psi_+-|phi_+-> |^2 = (1 +- n_a . n_b) / 2
    const double cosine = a.axis().normalized().dot(b.axis().normalized());
    return std::min(1.0, 0.5 * (1.0 + std::abs(cosine)));
}

struct EurResult {
    double entropy_sum = 0.0;
    double bound = 0.0;
    /// c = 1: the bound vanishes and ratios against it are undefined.
    bool zero_bound = false;
};

inline EurResult eur_check(const QubitState& s, const PauliObservable& a,
                           const PauliObservable& b) {
    const double c = complementarity_c(a, b);
    EurResult r;
    r.entropy_sum = entropy_of_measurement(s, a) + entropy_of_measurement(s, b);
    r.zero_bound = c >= 1.0 - tol::zero_bound;
    r.bound = r.zero_bound ? 0.0 : -std::log2(c);
    return r;
}

/// Every bound of every relation for a single (state, A, B) triple.
struct RelationReport {
    double varA = 0.0;
    double varB = 0.0;
    double product = 0.0;
    double rur_bound = 0.0;
    double sur_bound = 0.0;
    double eq19_bound = 0.0;
    double remainder = 0.0;
    double equality_residual = 0.0;
    double sum_lhs = 0.0;
    double sum_bound = 0.0;
    /// Empty when either observable has a degenerate spectrum.
    std::optional<double> entropy_sum;
    std::optional<double> entropy_bound;
};

inline RelationReport relation_report(const QubitState& s, const PauliObservable& a,
                                      const PauliObservable& b) {
    RelationReport r;
    r.varA = variance(s, a);
    r.varB = variance(s, b);
    r.product = r.varA * r.varB;
    r.rur_bound = rur_bound(s, a, b);
    r.sur_bound = r.rur_bound + anticommutator_term(s, a, b);
    r.remainder = equality_remainder(s, a, b);
    r.eq19_bound = r.rur_bound + r.remainder;
    r.equality_residual = r.product - r.sur_bound - r.remainder;
    const SumRelation sum = sum_relation(s, a, b);
    r.sum_lhs = sum.lhs;
    r.sum_bound = sum.bound;
    if (!a.is_scalar() && !b.is_scalar()) {
        const EurResult eur = eur_check(s, a, b);
        r.entropy_sum = eur.entropy_sum;
        r.entropy_bound = eur.bound;
    }
    return r;
}

namespace detail {

inline double checked_gram(const PauliObservable& a, const PauliObservable& b) {
    const double gram = xi_gram(a, b);
    if (gram <= tol::collinear) {
        throw error(errc::collinear_observables,
                    "observables share a Bloch axis; the estimator is undefined");
    }
    return gram;
}

}  // namespace detail

/// Mixedness recovered from variances and moments of two observables:
/// M = 8 [Var(A)Var(B) - commutator term - anticommutator term] / Gram.
inline double estimate_mixedness(const QubitState& s, const PauliObservable& a,
                                 const PauliObservable& b) {
    const double gram = detail::checked_gram(a, b);
    const double numerator = variance(s, a) * variance(s, b) - commutator_term(s, a, b) -
                             anticommutator_term(s, a, b);
    return 8.0 * numerator / gram;
}

/// (AB + BA)/2 in Pauli coefficients: (a.b + a4 b4) I + (a4 b + b4 a).sigma
inline PauliObservable symmetrized_product(const PauliObservable& a, const PauliObservable& b) {
    return PauliObservable::from_parts(a.offset() * b.axis() + b.offset() * a.axis(),
                                       a.axis().dot(b.axis()) + a.offset() * b.offset());
}

/// [A,B]/(2i) = (a x b).sigma, whose expectation is the commutator moment.
inline PauliObservable commutator_observable(const PauliObservable& a, const PauliObservable& b) {
    return PauliObservable::from_parts(a.axis().cross(b.axis()), 0.0);
}

/// Outcome record of repeated projective measurements of one observable.
/// A scalar observable (multiple of I) needs no shots: its record has
/// shots = 0 and its value is exact.
struct MeasurementCounts {
    PauliObservable observable;
    std::array<double, 2> eigenvalues{};        ///< (lower, upper)
    std::array<std::uint64_t, 2> counts{};      ///< hits on (lower, upper)
    std::uint64_t shots = 0;

    /// Empirical mean; exact for a scalar observable.
    double mean() const {
        if (shots == 0) return observable.offset();
        return eigenvalues[0] + (eigenvalues[1] - eigenvalues[0]) * upper_frequency();
    }

    double upper_frequency() const {
        return shots == 0 ? 0.0 : static_cast<double>(counts[1]) / static_cast<double>(shots);
    }

    double gap() const { return eigenvalues[1] - eigenvalues[0]; }
};

inline MeasurementCounts make_counts(const PauliObservable& o, std::uint64_t lower,
                                     std::uint64_t upper) {
    MeasurementCounts m;
    m.observable = o;
    m.eigenvalues = o.eigenvalues();
    m.counts = {lower, upper};
    m.shots = lower + upper;
    if (m.shots == 0 && !o.is_scalar()) {
        throw error(errc::invalid_counts, "a non-scalar observable needs at least one shot");
    }
    return m;
}

/// Record for a scalar observable, measured without shots.
inline MeasurementCounts scalar_counts(const PauliObservable& o) {
    if (!o.is_scalar()) throw error(errc::invalid_counts, "observable is not a multiple of I");
    return make_counts(o, 0, 0);
}

/// i.i.d. projective measurements of o; deterministic for a fixed seed.
inline MeasurementCounts simulate_shots(const QubitState& s, const PauliObservable& o,
                                        std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw error(errc::invalid_counts, "shots must be positive");
    const double p_upper = detail::outcome_probabilities(s, o)[1];
    std::uint64_t upper = 0;
    if (p_upper >= 1.0) {
        upper = shots;
    } else if (p_upper > 0.0) {
        Engine rng(seed);
        std::binomial_distribution<std::uint64_t> draw(shots, p_upper);
        upper = draw(rng);
    }
    return make_counts(o, shots - upper, upper);
}

/// Counts from measuring A, B, their symmetrized product and their commutator observable.
struct EstimatorCounts {
    MeasurementCounts a;
    MeasurementCounts b;
    MeasurementCounts symmetrized;
    MeasurementCounts commutator;
};

/// Simulates all four measurements on task streams 0 .. 3 of the seed.
inline EstimatorCounts simulate_estimator_counts(const QubitState& s, const PauliObservable& a,
                                                 const PauliObservable& b, std::uint64_t shots,
                                                 std::uint64_t seed) {
    auto measure = [&](const PauliObservable& o, std::uint64_t index) {
        return o.is_scalar() ? scalar_counts(o) : simulate_shots(s, o, shots, task_seed(seed, index));
    };
    return {measure(a, 0), measure(b, 1), measure(symmetrized_product(a, b), 2),
            measure(commutator_observable(a, b), 3)};
}

struct MixednessEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Plugs empirical moments into the mixedness estimator. Second moments of
/// the two-outcome observables follow exactly from eigenvalues and
/// frequencies. The standard error is the first-order (delta-method)
/// propagation of the four binomial frequency variances.
inline MixednessEstimate estimate_mixedness_from_counts(const EstimatorCounts& c) {
    const PauliObservable& a = c.a.observable;
    const PauliObservable& b = c.b.observable;
    const double gram = detail::checked_gram(a, b);
    const double tolerance = 1e-9 * (1.0 + a.axis().norm() * b.axis().norm() +
                                     std::abs(a.offset() * b.offset()));
    auto same = [&](const PauliObservable& x, const PauliObservable& y) {
        return (x.axis() - y.axis()).norm() <= tolerance && std::abs(x.a4 - y.a4) <= tolerance;
    };
    if (!same(c.symmetrized.observable, symmetrized_product(a, b)) ||
        !same(c.commutator.observable, commutator_observable(a, b))) {
        throw error(errc::invalid_counts, "auxiliary counts do not match the observable pair");
    }
    if (c.a.shots == 0 || c.b.shots == 0) {
        throw error(errc::invalid_counts, "both observables need at least one shot");
    }

    const double fa = c.a.upper_frequency();
    const double fb = c.b.upper_frequency();
    const double var_a = c.a.gap() * c.a.gap() * fa * (1.0 - fa);
    const double var_b = c.b.gap() * c.b.gap() * fb * (1.0 - fb);
    const double mean_a = c.a.mean();
    const double mean_b = c.b.mean();
    const double comm = c.commutator.mean();
    const double cov = c.symmetrized.mean() - mean_a * mean_b;

    const double scale = 8.0 / gram;
    MixednessEstimate out;
    out.estimate = scale * (var_a * var_b - comm * comm - cov * cov);

    // d(estimate)/d(frequency) for each record, times its binomial variance.
    auto binomial_var = [](const MeasurementCounts& m) {
        if (m.shots == 0) return 0.0;
        const double f = m.upper_frequency();
        return f * (1.0 - f) / static_cast<double>(m.shots);
    };
    const double d_fa =
        scale * (var_b * c.a.gap() * c.a.gap() * (1.0 - 2.0 * fa) + 2.0 * cov * c.a.gap() * mean_b);
    const double d_fb =
        scale * (var_a * c.b.gap() * c.b.gap() * (1.0 - 2.0 * fb) + 2.0 * cov * c.b.gap() * mean_a);
    const double d_fc = scale * (-2.0 * cov * c.symmetrized.gap());
    const double d_fk = scale * (-2.0 * comm * c.commutator.gap());
    out.std_error = std::sqrt(d_fa * d_fa * binomial_var(c.a) + d_fb * d_fb * binomial_var(c.b) +
                              d_fc * d_fc * binomial_var(c.symmetrized) +
                              d_fk * d_fk * binomial_var(c.commutator));
    return out;
}

}  // namespace varunc
