#pragma once

// d-dimensional density matrices, used for the convexity of mixedness.

#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "varunc/error.hpp"

namespace varunc {

using MatX = Eigen::MatrixXcd;

class GeneralState {
public:
    explicit GeneralState(MatX matrix) : matrix_(std::move(matrix)) {
        if (matrix_.rows() < 1 || matrix_.rows() != matrix_.cols()) {
            throw error(errc::bad_dimension, "density matrix must be square and non-empty");
        }
        if (!matrix_.allFinite() || (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > tol::repr) {
            throw error(errc::not_hermitian, "density matrix is not Hermitian");
        }
        if (std::abs(matrix_.trace() - 1.0) > tol::repr) {
            throw error(errc::trace_not_one, "trace deviates from 1");
        }
        if (min_eigenvalue() < -tol::positivity) {
            throw error(errc::not_positive, "negative eigenvalue");
        }
    }

    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    const MatX& matrix() const { return matrix_; }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<MatX> solver(matrix_, Eigen::EigenvaluesOnly);
        return solver.eigenvalues()[0];
    }

    static GeneralState maximally_mixed(std::size_t d) {
        if (d < 1) throw error(errc::bad_dimension, "dimension must be positive");
        return GeneralState(MatX::Identity(d, d) / static_cast<double>(d));
    }

    /// x * a + (1 - x) * b
    static GeneralState mixture(double x, const GeneralState& a, const GeneralState& b) {
        if (a.dim() != b.dim()) throw error(errc::bad_dimension, "dimension mismatch");
        if (!(x >= 0.0 && x <= 1.0)) throw error(errc::invalid_params, "weight outside [0, 1]");
        return GeneralState(x * a.matrix_ + (1.0 - x) * b.matrix_);
    }

private:
    MatX matrix_;
};

/// 1 - tr(rho^2), in [0, (d-1)/d].
inline double mixedness_general(const GeneralState& g) {
    // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return 1.0 - g.matrix().squaredNorm();
}

}  // namespace varunc
