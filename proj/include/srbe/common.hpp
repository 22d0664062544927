#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace srbe {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Error hierarchy. Every failure mode named by the library derives from
// srbe::Error so callers can catch the whole family at once.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct AsymmetricInput : Error {
    using Error::Error;
};

struct NotPositiveDefinite : Error {
    using Error::Error;
};

struct RankDeficientDesign : Error {
    using Error::Error;
};

struct InvalidShrinkage : Error {
    using Error::Error;
};

struct UnknownPair : Error {
    using Error::Error;
};

struct EmptyGrid : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct MissingColumn : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Small shared numeric helpers.
// ---------------------------------------------------------------------------

/// Max-norm relative symmetry defect, ||M - M'||_max / max(||M||_max, 1).
inline double symmetry_defect(const Matrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0);
    return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

inline void require_symmetric(const Matrix& m, const char* what, double tol = 1e-8) {
    if (symmetry_defect(m) > tol)
        throw AsymmetricInput(std::string(what) + ": matrix deviates from symmetry beyond tolerance");
}

/// 0.5 * (M + M') — removes roundoff skew before eigensolves.
inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

/// Flips eigenvector columns so the first component with magnitude above
/// `threshold` is nonnegative. Makes decompositions reproducible.
inline void fix_column_signs(Matrix& vectors, double threshold = 1e-12) {
    for (Index j = 0; j < vectors.cols(); ++j) {
        for (Index i = 0; i < vectors.rows(); ++i) {
            const double v = vectors(i, j);
            if (std::abs(v) > threshold) {
                if (v < 0.0) vectors.col(j) = -vectors.col(j);
                break;
            }
        }
    }
}

/// Eigenvalues (descending) and matching sign-fixed eigenvectors of a
/// symmetric matrix. Ties keep the solver's order, so degenerate spectra
/// (e.g. the zero matrix) come back in coordinate order.
inline std::pair<Vector, Matrix> eigen_sym_descending(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(m));
    if (solver.info() != Eigen::Success)
        throw Error("symmetric eigendecomposition failed to converge");
    const Index n = m.rows();
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = j;
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return solver.eigenvalues()[a] > solver.eigenvalues()[b];
    });
    Vector values(n);
    Matrix vectors(n, n);
    for (Index j = 0; j < n; ++j) {
        values[j] = solver.eigenvalues()[order[static_cast<std::size_t>(j)]];
        vectors.col(j) = solver.eigenvectors().col(order[static_cast<std::size_t>(j)]);
    }
    fix_column_signs(vectors);
    return {values, vectors};
}

}  // namespace srbe
