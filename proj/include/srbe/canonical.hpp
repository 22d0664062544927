#pragma once

#include "srbe/common.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

namespace srbe {

// ---------------------------------------------------------------------------
// Model inputs.
//
// The fitted model keeps x_included (n x l); the analyst has dropped
// x_omitted (n x p), whose contribution delta = x_omitted * beta_omitted
// drifts into the error term. Prior knowledge about the kept coefficients
// arrives as a stochastic restriction r = R b1 + g + v with D(v) = sigma2 * W.
// ---------------------------------------------------------------------------

struct SampleModel {
    Vector y;
    Matrix x_included;               // X1, n x l, full column rank
    Matrix x_omitted;                // X2, n x p (p may be 0)
    std::optional<Vector> beta_included;  // true in simulation, plug-in otherwise
    std::optional<Vector> beta_omitted;
    double sigma2 = 1.0;

    Index n() const { return x_included.rows(); }
    Index l() const { return x_included.cols(); }
    Index p() const { return x_omitted.cols(); }

    /// delta = X2 * b2; the zero vector when nothing was omitted.
    Vector drift_vector() const {
        if (p() == 0) return Vector::Zero(n());
        if (!beta_omitted || beta_omitted->size() != p())
            throw ValidationError("SampleModel: beta_omitted required (length p) when p > 0");
        return x_omitted * (*beta_omitted);
    }

    void validate() const {
        const Index nn = n(), ll = l(), pp = p();
        if (y.size() != nn) throw DimensionMismatch("SampleModel: y length != rows of x_included");
        if (pp > 0 && x_omitted.rows() != nn)
            throw DimensionMismatch("SampleModel: x_omitted row count != n");
        if (nn < ll + pp || ll + pp < 1)
            throw ValidationError("SampleModel: need n >= l + p >= 1");
        if (beta_included && beta_included->size() != ll)
            throw DimensionMismatch("SampleModel: beta_included length != l");
        if (beta_omitted && beta_omitted->size() != pp)
            throw DimensionMismatch("SampleModel: beta_omitted length != p");
        if (!(sigma2 > 0.0)) throw ValidationError("SampleModel: sigma2 must be positive");
    }
};

struct RestrictionSystem {
    Vector r;   // observed prior values, length q
    Matrix R;   // q x l, rank q
    Vector g;   // prior misspecification, length q
    Matrix W;   // q x q SPD scale of D(v) = sigma2 * W

    Index q() const { return R.rows(); }

    void validate() const {
        const Index qq = q();
        if (qq < 1) throw ValidationError("RestrictionSystem: need at least one restriction row");
        if (r.size() != qq) throw DimensionMismatch("RestrictionSystem: r length != q");
        if (g.size() != qq) throw DimensionMismatch("RestrictionSystem: g length != q");
        if (W.rows() != qq || W.cols() != qq)
            throw DimensionMismatch("RestrictionSystem: W must be q x q");
        if (qq > R.cols()) throw ValidationError("RestrictionSystem: q must not exceed l");
        require_symmetric(W, "RestrictionSystem W");
        Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(W));
        if (es.eigenvalues().minCoeff() <= 0.0)
            throw NotPositiveDefinite("RestrictionSystem: W is not positive definite");
        Eigen::JacobiSVD<Matrix> svd(R);
        if (svd.singularValues().minCoeff() <
            1e-10 * std::max(svd.singularValues().maxCoeff(), 1e-300))
            throw ValidationError("RestrictionSystem: R is numerically rank deficient");
    }

    /// Identity-scale restriction (W = I_q).
    static RestrictionSystem with_identity_scale(Vector r_, Matrix R_, Vector g_) {
        RestrictionSystem rs;
        rs.R = std::move(R_);
        rs.r = std::move(r_);
        rs.g = std::move(g_);
        rs.W = Matrix::Identity(rs.R.rows(), rs.R.rows());
        return rs;
    }
};

// ---------------------------------------------------------------------------
// Canonical form.
//
// B simultaneously diagonalizes the two Gram matrices:
//     B' X1'X1 B = I          and     B' R' Psi^-1 R B = Lambda,
// with Psi = sigma2 * W. In the transformed model X* = X1 B has orthonormal
// columns and every moment formula reduces to diagonal arithmetic through
//     tau_i = 1 / (1 + sigma2 * lambda_i).
// `drift` is the vector X*'delta + R*'W^-1 g shared by all bias expressions.
// ---------------------------------------------------------------------------

struct CanonicalForm {
    Matrix B;          // l x l, nonsingular
    Vector Lambda;     // descending, nonnegative; zero beyond index q
    Matrix x_star;     // X1 B, n x l
    Matrix r_star;     // R B, q x l
    Vector gamma;      // B^-1 beta1
    Vector tau;        // elementwise 1 / (1 + sigma2 * lambda_i)
    Vector drift;      // X*'delta + R*'W^-1 g
    Matrix eigbasis;   // T: standardized eigenvectors of X1'X1, descending
    double sigma2 = 1.0;
    Index q = 0;

    Index l() const { return B.rows(); }
    Index n() const { return x_star.rows(); }

    /// diag(tau) as a dense matrix; handy in matrix-level formulas.
    Matrix tau_matrix() const { return Matrix(tau.asDiagonal()); }
};

/// Simultaneous diagonalization of an SPD `gram` and a symmetric NND
/// `prior_gram`: returns (B, Lambda) with B'*gram*B = I and
/// B'*prior_gram*B = diag(Lambda), Lambda descending.
///
/// Factor gram = LL', eigendecompose L^-1 prior_gram L^-T = Q Lambda Q',
/// set B = L^-T Q. Both identities then hold by construction.
inline std::pair<Matrix, Vector> simultaneous_decompose(const Matrix& gram,
                                                        const Matrix& prior_gram) {
    if (gram.rows() != gram.cols() || prior_gram.rows() != prior_gram.cols() ||
        gram.rows() != prior_gram.rows())
        throw DimensionMismatch("simultaneous_decompose: need two square matrices of equal size");
    require_symmetric(gram, "simultaneous_decompose gram");
    require_symmetric(prior_gram, "simultaneous_decompose prior_gram");

    Eigen::LLT<Matrix> llt(symmetrized(gram));
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("simultaneous_decompose: gram is not positive definite");
    const Matrix l_factor = llt.matrixL();

    // M = L^-1 * prior_gram * L^-T
    Matrix middle = l_factor.triangularView<Eigen::Lower>().solve(symmetrized(prior_gram));
    middle = l_factor.triangularView<Eigen::Lower>().solve(Matrix(middle.transpose()));
    auto [values, vectors] = eigen_sym_descending(middle);

    // prior_gram is NND, so negative eigenvalues are roundoff; clamp them.
    for (Index i = 0; i < values.size(); ++i) values[i] = std::max(values[i], 0.0);

    Matrix b = l_factor.transpose().triangularView<Eigen::Upper>().solve(vectors);
    return {std::move(b), std::move(values)};
}

/// Eigenvalues of x'x (descending), condition number sqrt(max/min) and the
/// VIF vector (diagonal of the inverse column correlation matrix).
struct DesignDiagnostics {
    Vector eigenvalues;
    double condition_number = 0.0;
    Vector vif;
};

inline DesignDiagnostics design_diagnostics(const Matrix& x) {
    const Index k = x.cols();
    if (x.rows() < k || k == 0) throw DimensionMismatch("design_diagnostics: need n >= k >= 1");
    Eigen::JacobiSVD<Matrix> svd(x);
    const double smax = svd.singularValues().maxCoeff();
    if (svd.singularValues().minCoeff() < 1e-10 * smax)
        throw RankDeficientDesign("design_diagnostics: numerically rank-deficient design");

    DesignDiagnostics out;
    auto [values, vectors] = eigen_sym_descending(x.transpose() * x);
    out.eigenvalues = values;
    out.condition_number = std::sqrt(values[0] / values[k - 1]);

    Matrix centered = x.rowwise() - x.colwise().mean();
    Vector norms = centered.colwise().norm();
    for (Index j = 0; j < k; ++j)
        if (norms[j] <= 0.0)
            throw RankDeficientDesign("design_diagnostics: constant column has no correlation");
    Matrix corr = (centered.array().rowwise() / norms.transpose().array()).matrix();
    corr = corr.transpose() * corr;
    out.vif = corr.inverse().diagonal();
    return out;
}

/// Builds the canonical form shared by every estimator/moment formula.
inline CanonicalForm build_canonical(const SampleModel& model,
                                     const RestrictionSystem& restriction) {
    model.validate();
    restriction.validate();
    if (restriction.R.cols() != model.l())
        throw DimensionMismatch("build_canonical: R column count != l");
    if (!model.beta_included)
        throw ValidationError("build_canonical: beta_included required (true or plug-in)");

    {
        Eigen::JacobiSVD<Matrix> svd(model.x_included);
        if (svd.singularValues().minCoeff() <
            1e-10 * svd.singularValues().maxCoeff())
            throw RankDeficientDesign("build_canonical: x_included is numerically rank deficient");
    }

    const Matrix gram = model.x_included.transpose() * model.x_included;
    const Matrix w_inv_r = restriction.W.llt().solve(restriction.R);  // W^-1 R
    const Matrix prior_gram = restriction.R.transpose() * w_inv_r / model.sigma2;

    CanonicalForm canon;
    canon.sigma2 = model.sigma2;
    canon.q = restriction.q();
    std::tie(canon.B, canon.Lambda) = simultaneous_decompose(gram, prior_gram);
    canon.x_star = model.x_included * canon.B;
    canon.r_star = restriction.R * canon.B;
    canon.gamma = canon.B.partialPivLu().solve(*model.beta_included);

    canon.tau.resize(canon.Lambda.size());
    for (Index i = 0; i < canon.Lambda.size(); ++i)
        canon.tau[i] = 1.0 / (1.0 + model.sigma2 * canon.Lambda[i]);

    const Vector delta = model.drift_vector();
    canon.drift = canon.x_star.transpose() * delta +
                  canon.r_star.transpose() * restriction.W.llt().solve(restriction.g);

    std::tie(std::ignore, canon.eigbasis) = eigen_sym_descending(gram);
    return canon;
}

}  // namespace srbe
