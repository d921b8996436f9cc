#pragma once

// Single-qubit states and observables in the Bloch representation.
//
// Basis convention: index 0 is |0> (ground), index 1 is |1> (excited), and
// sigma_z = diag(1, -1), so the Bloch vector (0, 0, 1) is |0><0|.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "varunc/error.hpp"

namespace varunc {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3d;

namespace pauli {

inline Mat2 x() {
    Mat2 m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

inline Mat2 y() {
    Mat2 m;
    m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return m;
}

inline Mat2 z() {
    Mat2 m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

inline Mat2 identity() { return Mat2::Identity(); }

/// sigma_minus = |0><1|, the qubit lowering operator.
inline Mat2 lowering() {
    Mat2 m = Mat2::Zero();
    m(0, 1) = 1.0;
    return m;
}

inline Mat2 raising() { return lowering().adjoint(); }

}  // namespace pauli

namespace detail {

inline double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

inline double hermiticity_defect(const Mat2& m) { return max_abs(m - m.adjoint()); }

/// Eigenvalues of a Hermitian 2x2 matrix, ascending.
inline std::array<double, 2> hermitian_eigenvalues(const Mat2& m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double half_gap = std::hypot((a - d) / 2.0, std::abs(m(0, 1)));
    const double mean = (a + d) / 2.0;
    return {mean - half_gap, mean + half_gap};
}

}  // namespace detail

struct BlochVector {
    double px = 0.0;
    double py = 0.0;
    double pz = 0.0;

    Vec3 vec() const { return {px, py, pz}; }
    double norm_squared() const { return px * px + py * py + pz * pz; }
    double norm() const { return std::sqrt(norm_squared()); }

    static BlochVector from(const Vec3& v) { return {v[0], v[1], v[2]}; }

    friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

/// A = a1*sigma_x + a2*sigma_y + a3*sigma_z + a4*I with real coefficients.
struct PauliObservable {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double a4 = 0.0;

    /// Coefficients of the traceless part.
    Vec3 axis() const { return {a1, a2, a3}; }
    double offset() const { return a4; }

    Mat2 matrix() const {
        return a1 * pauli::x() + a2 * pauli::y() + a3 * pauli::z() + a4 * pauli::identity();
    }

    /// Eigenvalues a4 -/+ |axis|, ascending.
    std::array<double, 2> eigenvalues() const {
        const double r = axis().norm();
        return {a4 - r, a4 + r};
    }

    bool is_scalar(double gap = tol::spectral_gap) const { return 2.0 * axis().norm() <= gap; }

    static PauliObservable from_parts(const Vec3& axis, double offset) {
        return {axis[0], axis[1], axis[2], offset};
    }

    static PauliObservable sigma_x() { return {1, 0, 0, 0}; }
    static PauliObservable sigma_y() { return {0, 1, 0, 0}; }
    static PauliObservable sigma_z() { return {0, 0, 1, 0}; }
    static PauliObservable identity() { return {0, 0, 0, 1}; }

    friend PauliObservable operator+(const PauliObservable& l, const PauliObservable& r) {
        return {l.a1 + r.a1, l.a2 + r.a2, l.a3 + r.a3, l.a4 + r.a4};
    }
    friend PauliObservable operator*(double c, const PauliObservable& o) {
        return {c * o.a1, c * o.a2, c * o.a3, c * o.a4};
    }
    friend bool operator==(const PauliObservable&, const PauliObservable&) = default;
};

/// Qubit density matrix. The Bloch vector is stored; the matrix is derived.
class QubitState {
public:
    QubitState() = default;

    explicit QubitState(const BlochVector& b) : bloch_(b) {
        if (!std::isfinite(b.px) || !std::isfinite(b.py) || !std::isfinite(b.pz)) {
            throw error(errc::bloch_norm_exceeded, "non-finite Bloch component");
        }
        if (b.norm_squared() > 1.0 + tol::repr) {
            throw error(errc::bloch_norm_exceeded,
                        "|p|^2 = " + std::to_string(b.norm_squared()) + " exceeds 1");
        }
    }

    const BlochVector& bloch() const { return bloch_; }

    /// rho = (I + px sigma_x + py sigma_y + pz sigma_z) / 2
    Mat2 matrix() const {
        Mat2 m;
        m(0, 0) = 0.5 * (1.0 + bloch_.pz);
        m(1, 1) = 0.5 * (1.0 - bloch_.pz);
        m(0, 1) = cplx(0.5 * bloch_.px, -0.5 * bloch_.py);
        m(1, 0) = cplx(0.5 * bloch_.px, 0.5 * bloch_.py);
        return m;
    }

    /// Ground-state population <0|rho|0>.
    double ground_population() const { return 0.5 * (1.0 + bloch_.pz); }
    /// Excited-state population <1|rho|1>.
    double excited_population() const { return 0.5 * (1.0 - bloch_.pz); }
    /// Coherence <1|rho|0>.
    cplx coherence() const { return {0.5 * bloch_.px, 0.5 * bloch_.py}; }

    static QubitState maximally_mixed() { return QubitState(BlochVector{0, 0, 0}); }
    static QubitState ground() { return QubitState(BlochVector{0, 0, 1}); }
    static QubitState excited() { return QubitState(BlochVector{0, 0, -1}); }

private:
    BlochVector bloch_{};
};

inline QubitState bloch_to_matrix(const BlochVector& b) { return QubitState(b); }

/// Inverts the Bloch parameterization: p_k = tr(m sigma_k).
inline BlochVector matrix_to_bloch(const Mat2& m) {
    if (!m.allFinite()) {
        throw error(errc::not_hermitian, "matrix has non-finite entries");
    }
    if (detail::hermiticity_defect(m) > tol::repr) {
        throw error(errc::not_hermitian, "max |m - m^dagger| exceeds tolerance");
    }
    if (std::abs(m.trace() - 1.0) > tol::repr) {
        throw error(errc::trace_not_one, "trace deviates from 1");
    }
    if (detail::hermitian_eigenvalues(m)[0] < -tol::positivity) {
        throw error(errc::not_positive, "negative eigenvalue");
    }
    return {(m * pauli::x()).trace().real(), (m * pauli::y()).trace().real(),
            (m * pauli::z()).trace().real()};
}

/// a_k = tr(m sigma_k)/2, a4 = tr(m)/2.
inline PauliObservable decompose_observable(const Mat2& m) {
    if (!m.allFinite() || detail::hermiticity_defect(m) > tol::repr) {
        throw error(errc::not_hermitian, "observable is not Hermitian");
    }
    return {0.5 * (m * pauli::x()).trace().real(), 0.5 * (m * pauli::y()).trace().real(),
            0.5 * (m * pauli::z()).trace().real(), 0.5 * m.trace().real()};
}

inline double expectation(const QubitState& s, const PauliObservable& o) {
    return (s.matrix() * o.matrix()).trace().real();
}

namespace detail {

inline double clamp_variance(double v) {
    if (v < -tol::variance_clamp) {
        throw error(errc::negative_variance, "variance " + std::to_string(v) + " below tolerance");
    }
    return std::max(v, 0.0);
}

inline double expectation(const Mat2& rho, const Mat2& op) { return (rho * op).trace().real(); }

}  // namespace detail

/// <O^2> - <O>^2, with rounding noise in [-1e-12, 0) clamped to zero.
inline double variance(const QubitState& s, const PauliObservable& o) {
    const Mat2 rho = s.matrix();
    const Mat2 op = o.matrix();
    const double mean = detail::expectation(rho, op);
    return detail::clamp_variance(detail::expectation(rho, op * op) - mean * mean);
}

/// |<[A,B]>/(2i)|^2
inline double commutator_term(const QubitState& s, const PauliObservable& a,
                              const PauliObservable& b) {
    const Mat2 ma = a.matrix();
    const Mat2 mb = b.matrix();
    const cplx value = (s.matrix() * (ma * mb - mb * ma)).trace() / cplx(0.0, 2.0);
    return value.real() * value.real();
}

/// (<AB + BA>/2 - <A><B>)^2, the squared symmetrized covariance.
inline double anticommutator_term(const QubitState& s, const PauliObservable& a,
                                  const PauliObservable& b) {
    const Mat2 rho = s.matrix();
    const Mat2 ma = a.matrix();
    const Mat2 mb = b.matrix();
    const double cov = 0.5 * detail::expectation(rho, ma * mb + mb * ma) -
                       detail::expectation(rho, ma) * detail::expectation(rho, mb);
    return cov * cov;
}

/// xi(R, S) = 2 tr(RS) - tr(R) tr(S)
inline double xi(const PauliObservable& r, const PauliObservable& s) {
    const Mat2 mr = r.matrix();
    const Mat2 ms = s.matrix();
    return 2.0 * (mr * ms).trace().real() - mr.trace().real() * ms.trace().real();
}

/// xi(A,A) xi(B,B) - xi(A,B)^2, the Gram determinant of the traceless parts (times 16).
inline double xi_gram(const PauliObservable& a, const PauliObservable& b) {
    const double ab = xi(a, b);
    return xi(a, a) * xi(b, b) - ab * ab;
}

/// M = 1 - tr(rho^2)
inline double mixedness(const QubitState& s) {
    const Mat2 rho = s.matrix();
    return 1.0 - (rho * rho).trace().real();
}

/// Bloch-coordinate expressions for the quantities above. These are the
/// closed forms the equality is proved with and serve as a second route.
namespace closed_form {

inline double mixedness(const BlochVector& p) { return 0.5 * (1.0 - p.norm_squared()); }

inline double expectation(const BlochVector& p, const PauliObservable& o) {
    return o.a1 * p.px + o.a2 * p.py + o.a3 * p.pz + o.a4;
}

inline double variance(const BlochVector& p, const PauliObservable& o) {
    const double px = p.px, py = p.py, pz = p.pz;
    return (1 - px * px) * o.a1 * o.a1 + (1 - py * py) * o.a2 * o.a2 +
           (1 - pz * pz) * o.a3 * o.a3 -
           2 * (py * pz * o.a2 * o.a3 + px * o.a1 * (py * o.a2 + pz * o.a3));
}

inline double commutator_term(const BlochVector& p, const PauliObservable& a,
                              const PauliObservable& b) {
    const double v = p.px * (a.a3 * b.a2 - a.a2 * b.a3) + p.py * (a.a1 * b.a3 - a.a3 * b.a1) +
                     p.pz * (a.a2 * b.a1 - a.a1 * b.a2);
    return v * v;
}

/// (a.p)(b.p) - a.b, i.e. minus the symmetrized covariance. The
/// anticommutator term is its square.
inline double covariance_form(const BlochVector& p, const PauliObservable& a,
                         const PauliObservable& b) {
    const double px = p.px, py = p.py, pz = p.pz;
    return ((px * px - 1) * a.a1 + px * (py * a.a2 + pz * a.a3)) * b.a1 +
           (px * py * a.a1 + (py * py - 1) * a.a2 + py * pz * a.a3) * b.a2 +
           (px * pz * a.a1 + py * pz * a.a2 + (pz * pz - 1) * a.a3) * b.a3;
}

inline double anticommutator_term(const BlochVector& p, const PauliObservable& a,
                                  const PauliObservable& b) {
    const double c = covariance_form(p, a, b);
    return c * c;
}

inline double trace_square(const PauliObservable& o) {
    return 2 * (o.a1 * o.a1 + o.a2 * o.a2 + o.a3 * o.a3 + o.a4 * o.a4);
}

inline double trace(const PauliObservable& o) { return 2 * o.a4; }

inline double trace_product(const PauliObservable& a, const PauliObservable& b) {
    return 2 * (a.a1 * b.a1 + a.a2 * b.a2 + a.a3 * b.a3 + a.a4 * b.a4);
}

/// xi over the traceless parts: 4 (a . b).
inline double xi(const PauliObservable& a, const PauliObservable& b) {
    return 4.0 * a.axis().dot(b.axis());
}

}  // namespace closed_form

}  // namespace varunc
