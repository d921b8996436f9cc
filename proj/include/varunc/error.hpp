#pragma once

#include <stdexcept>
#include <string>

namespace varunc {

enum class errc {
    bloch_norm_exceeded,
    not_hermitian,
    trace_not_one,
    not_positive,
    bad_dimension,
    negative_variance,
    degenerate_spectrum,
    collinear_observables,
    invalid_counts,
    negative_time,
    non_positive_time,
    non_positive_lambda,
    step_too_large,
    positivity_lost,
    invalid_params,
    invalid_grid,
};

inline const char* to_string(errc code) noexcept {
    switch (code) {
    case errc::bloch_norm_exceeded: return "bloch_norm_exceeded";
    case errc::not_hermitian: return "not_hermitian";
    case errc::trace_not_one: return "trace_not_one";
    case errc::not_positive: return "not_positive";
    case errc::bad_dimension: return "bad_dimension";
    case errc::negative_variance: return "negative_variance";
    case errc::degenerate_spectrum: return "degenerate_spectrum";
    case errc::collinear_observables: return "collinear";
    case errc::invalid_counts: return "invalid_counts";
    case errc::negative_time: return "negative_time";
    case errc::non_positive_time: return "non_positive_time";
    case errc::non_positive_lambda: return "non_positive_lambda";
    case errc::step_too_large: return "step_too_large";
    case errc::positivity_lost: return "positivity_lost";
    case errc::invalid_params: return "invalid_params";
    case errc::invalid_grid: return "invalid_grid";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

namespace tol {
/// Exact-algebra checks (Hermiticity, trace, round trips).
inline constexpr double repr = 1e-12;
/// Smallest eigenvalue accepted for a density matrix.
inline constexpr double positivity = 1e-10;
/// Below this a variance is treated as a bug rather than rounding noise.
inline constexpr double variance_clamp = 1e-12;
/// Gram determinant of the observable axes under which the estimator is undefined.
inline constexpr double collinear = 1e-9;
/// Minimum eigenvalue gap for projective measurements.
inline constexpr double spectral_gap = 1e-9;
/// Bounds at or below this make a tightness ratio undefined.
inline constexpr double zero_bound = 1e-12;
}  // namespace tol

}  // namespace varunc
