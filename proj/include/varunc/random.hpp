#pragma once

// Seeded samplers for states and observables. Every function either takes
// an engine by reference or a seed; nothing touches global state.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "varunc/general_state.hpp"
#include "varunc/qubit.hpp"

namespace varunc {

using Engine = std::mt19937_64;

enum class StateKind { pure, mixed };

/// Seed for the index-th independent task derived from a base seed. Distinct
/// (base, index) pairs give unrelated streams, so nearby base seeds never share
/// a task stream.
inline std::uint64_t task_seed(std::uint64_t base, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

template <class URBG>
Vec3 random_unit_vector(URBG& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> phi_dist(0.0, 2.0 * std::numbers::pi);
    const double cos_theta = u(rng);
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    const double phi = phi_dist(rng);
    return {sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta};
}

/// Pure states are uniform on the Bloch sphere; mixed states are uniform in
/// the Bloch ball (radius = cube root of a uniform variate).
template <class URBG>
QubitState random_qubit_state(URBG& rng, StateKind kind) {
    Vec3 direction = random_unit_vector(rng);
    if (kind == StateKind::pure) {
        // Rounding can leave |p|^2 a few ulps above 1.
        direction /= direction.norm();
        return QubitState(BlochVector::from(direction));
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double radius = std::cbrt(u(rng));
    return QubitState(BlochVector::from(radius * direction));
}

inline QubitState random_qubit_state(std::uint64_t seed, StateKind kind) {
    Engine rng(seed);
    return random_qubit_state(rng, kind);
}

/// Coefficients i.i.d. uniform in [lo, hi].
template <class URBG>
PauliObservable random_observable(URBG& rng, double lo = -5.0, double hi = 5.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    const double a1 = u(rng);
    const double a2 = u(rng);
    const double a3 = u(rng);
    const double a4 = u(rng);
    return {a1, a2, a3, a4};
}

/// Ginibre ensemble: G G^dagger / tr(G G^dagger) with standard complex Gaussian G.
template <class URBG>
GeneralState random_density_matrix(URBG& rng, std::size_t d) {
    if (d < 2) throw error(errc::bad_dimension, "dimension must be at least 2");
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    MatX g(d, d);
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < d; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cplx(re, im);
        }
    }
    MatX rho = g * g.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return GeneralState(std::move(rho));
}

inline GeneralState random_density_matrix(std::uint64_t seed, std::size_t d) {
    Engine rng(seed);
    return random_density_matrix(rng, d);
}

}  // namespace varunc
