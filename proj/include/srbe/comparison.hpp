#pragma once

#include "srbe/predictors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <limits>

namespace srbe {

// ---------------------------------------------------------------------------
// MSEM superiority machinery.
//
// For an ordered pair (i, j), estimator j dominates estimator i in the MSEM
// sense when Delta = MSEM(i) - MSEM(j) is nonnegative definite. Two exact
// characterizations drive everything here:
//
//   estimator level: if D = D(i) - D(j) is PD, Delta >= 0 iff
//                    b_j' (D + b_i b_i')^-1 b_j <= 1;
//   predictor level: MSEM_pred(i) - MSEM_pred(j) = A - theta theta' with
//                    A = X*(Delta + (b_i - b_j)(b_i - b_j)')X*' + dd' and
//                    theta = d + X*(b_i - b_j), so the difference is NND iff
//                    A >= 0, theta in range(A) and theta' A^+ theta <= 1.
//
// The appendix corollaries specialize the PD hypothesis of the first test to
// closed forms; they are tabulated at the bottom of this header.
// ---------------------------------------------------------------------------

struct Tolerances {
    double pd_rel = 1e-10;         // PD iff min eig >  pd_rel * scale
    double nnd_rel = 1e-10;        // NND iff min eig >= -nnd_rel * scale
    double membership_rel = 1e-8;  // range membership residual bound
    double boundary = 1e-9;        // |condition - 1| band flagged as boundary
    double symmetry_rel = 1e-8;
};

namespace detail {
inline double eig_scale(const Vector& eigenvalues) {
    return std::max(eigenvalues.cwiseAbs().maxCoeff(), 1.0);
}
}  // namespace detail

inline bool is_positive_definite(const Matrix& m, const Tolerances& tol = {}) {
    if (symmetry_defect(m) > tol.symmetry_rel)
        throw AsymmetricInput("is_positive_definite: input is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > tol.pd_rel * detail::eig_scale(es.eigenvalues());
}

inline bool is_nnd(const Matrix& m, const Tolerances& tol = {}) {
    if (symmetry_defect(m) > tol.symmetry_rel)
        throw AsymmetricInput("is_nnd: input is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol.nnd_rel * detail::eig_scale(es.eigenvalues());
}

/// Largest eigenvalue of N M^-1 for PD M and NND N; M - N is PD iff the
/// result is below one.
inline double largest_relative_eigenvalue(const Matrix& n, const Matrix& m,
                                          const Tolerances& tol = {}) {
    if (!is_positive_definite(m, tol))
        throw NotPositiveDefinite("largest_relative_eigenvalue: M must be positive definite");
    require_symmetric(n, "largest_relative_eigenvalue N", tol.symmetry_rel);
    Eigen::LLT<Matrix> llt(symmetrized(m));
    const Matrix l_factor = llt.matrixL();
    Matrix t = l_factor.triangularView<Eigen::Lower>().solve(symmetrized(n));
    t = l_factor.triangularView<Eigen::Lower>().solve(Matrix(t.transpose()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(t), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

/// Moore-Penrose pseudoinverse with singular values below
/// 1e-10 * sigma_max treated as zero.
inline Matrix pseudo_inverse(const Matrix& a) {
    if (a.size() == 0) return Matrix(a.cols(), a.rows());
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double cutoff = 1e-10 * sv.maxCoeff();
    Vector inv = Vector::Zero(sv.size());
    for (Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff && sv[i] > 0.0) inv[i] = 1.0 / sv[i];
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

inline bool in_column_space(const Matrix& a, const Vector& v, const Tolerances& tol = {}) {
    if (a.rows() != v.size())
        throw DimensionMismatch("in_column_space: vector length != rows of A");
    const Vector residual = v - a * (pseudo_inverse(a) * v);
    return residual.norm() <= tol.membership_rel * std::max(v.norm(), 1.0);
}

// ---------------------------------------------------------------------------
// Verdicts.
// ---------------------------------------------------------------------------

enum class ComparisonLevel { Estimator, Predictor };

enum class PreconditionStatus { Holds, Fails, NotApplicable };

enum class Verdict { JSuperior, NotSuperior, Inconclusive };

inline const char* to_string(ComparisonLevel level) {
    return level == ComparisonLevel::Estimator ? "estimator" : "predictor";
}

inline const char* to_string(PreconditionStatus s) {
    switch (s) {
        case PreconditionStatus::Holds: return "Holds";
        case PreconditionStatus::Fails: return "Fails";
        case PreconditionStatus::NotApplicable: return "NotApplicable";
    }
    return "?";
}

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::JSuperior: return "JSuperior";
        case Verdict::NotSuperior: return "NotSuperior";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct ComparisonVerdict {
    std::string label_i;
    std::string label_j;
    ComparisonLevel level = ComparisonLevel::Estimator;
    PreconditionStatus precondition = PreconditionStatus::Fails;
    std::string precondition_reason;
    double condition_value = std::numeric_limits<double>::quiet_NaN();
    Verdict verdict = Verdict::Inconclusive;
    bool boundary = false;
    bool range_membership = true;  // predictor level only
    double crosscheck_min_eig = 0.0;  // smallest eigenvalue of the MSEM difference
    double crosscheck_trace = 0.0;
    double crosscheck_scale = 1.0;  // max-entry scale of the two MSEM matrices

    /// Crosscheck consistency: the difference counts as NND up to the slack
    /// -1e-8 |trace| and a roundoff floor proportional to the inputs' scale.
    bool crosscheck_nnd() const {
        return crosscheck_min_eig >=
               -1e-8 * std::abs(crosscheck_trace) - 1e-12 * crosscheck_scale;
    }
};

namespace detail {

inline Verdict verdict_from_condition(double condition, bool membership_ok,
                                      const Tolerances& tol, bool* boundary) {
    *boundary = std::abs(condition - 1.0) <= tol.boundary;
    if (!membership_ok) return Verdict::NotSuperior;
    return condition <= 1.0 + tol.boundary ? Verdict::JSuperior : Verdict::NotSuperior;
}

inline std::pair<double, double> min_eig_and_trace(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m), Eigen::EigenvaluesOnly);
    return {es.eigenvalues().minCoeff(), m.trace()};
}

}  // namespace detail

/// Theorem-level comparison of two estimators on a shared canonical form.
inline ComparisonVerdict theorem1_compare(const EstimatorSpec& i, const EstimatorSpec& j,
                                          const CanonicalForm& canon,
                                          const Tolerances& tol = {}) {
    const EstimatorMoments mi = moments(i, canon);
    const EstimatorMoments mj = moments(j, canon);
    const Matrix dispersion_diff = symmetrized(mi.dispersion - mj.dispersion);
    const Matrix msem_diff = symmetrized(mi.msem - mj.msem);

    ComparisonVerdict out;
    out.label_i = i.label();
    out.label_j = j.label();
    out.level = ComparisonLevel::Estimator;
    std::tie(out.crosscheck_min_eig, out.crosscheck_trace) = detail::min_eig_and_trace(msem_diff);
    out.crosscheck_scale = std::max({mi.msem.cwiseAbs().maxCoeff(),
                                     mj.msem.cwiseAbs().maxCoeff(), 1.0});

    if (!is_positive_definite(dispersion_diff, tol)) {
        out.precondition = PreconditionStatus::Fails;
        out.precondition_reason = "D(i,j) not positive definite";
        out.verdict = Verdict::Inconclusive;
        return out;
    }
    out.precondition = PreconditionStatus::Holds;
    out.precondition_reason = "D(i,j) PD";
    const Matrix inner = symmetrized(dispersion_diff + mi.bias * mi.bias.transpose());
    out.condition_value = mj.bias.dot(pseudo_inverse(inner) * mj.bias);
    out.verdict = detail::verdict_from_condition(out.condition_value, true, tol, &out.boundary);
    return out;
}

/// Predictor-level comparison: rank-one dominance test on the lifted
/// difference A - theta theta'.
inline ComparisonVerdict theorem2_compare(const EstimatorSpec& i, const EstimatorSpec& j,
                                          const CanonicalForm& canon, const Vector& delta,
                                          const Tolerances& tol = {}) {
    if (delta.size() != canon.n())
        throw DimensionMismatch("theorem2_compare: delta length != n");
    const EstimatorMoments mi = moments(i, canon);
    const EstimatorMoments mj = moments(j, canon);
    const Matrix msem_diff = symmetrized(mi.msem - mj.msem);
    const Vector bias_gap = mi.bias - mj.bias;

    const Matrix lifted = symmetrized(
        canon.x_star * (msem_diff + bias_gap * bias_gap.transpose()) * canon.x_star.transpose() +
        delta * delta.transpose());
    const Vector theta = delta + canon.x_star * bias_gap;

    ComparisonVerdict out;
    out.label_i = i.label();
    out.label_j = j.label();
    out.level = ComparisonLevel::Predictor;
    const Matrix pred_i = predictor_moments(i, canon, delta).msem;
    const Matrix pred_j = predictor_moments(j, canon, delta).msem;
    const Matrix predictor_diff = symmetrized(pred_i - pred_j);
    std::tie(out.crosscheck_min_eig, out.crosscheck_trace) =
        detail::min_eig_and_trace(predictor_diff);
    out.crosscheck_scale =
        std::max({pred_i.cwiseAbs().maxCoeff(), pred_j.cwiseAbs().maxCoeff(), 1.0});

    if (!is_nnd(lifted, tol)) {
        out.precondition = PreconditionStatus::Fails;
        out.precondition_reason = "A not nonnegative definite";
        out.verdict = Verdict::Inconclusive;
        return out;
    }
    out.precondition = PreconditionStatus::Holds;
    out.precondition_reason = "A NND";
    out.range_membership = in_column_space(lifted, theta, tol);
    out.condition_value = theta.dot(pseudo_inverse(lifted) * theta);
    out.verdict =
        detail::verdict_from_condition(out.condition_value, out.range_membership, tol, &out.boundary);
    if (!out.range_membership) out.precondition_reason += "; theta outside range(A)";
    return out;
}

// ---------------------------------------------------------------------------
// Corollary table. Ordered pairs (i, j) with j the claimed dominator; each
// entry carries the closed-form dispersion difference printed in the proof
// and the matching precondition.
// ---------------------------------------------------------------------------

struct CorollaryParams {
    double k = 0.5;
    double d = 0.5;
    Index h = 1;
};

enum class PreconditionKind {
    Unconditional,     // positive scalar times sigma2 * diag(tau)
    ScalarThreshold,   // lhs > rhs on shrinkage parameters
    LambdaStar,        // coef * max eig((P tau P) tau^-1) < 1
    ProjectedPD        // scalar * P tau P positive definite
};

struct PreconditionRecord {
    int corollary = 0;
    PreconditionStatus status = PreconditionStatus::NotApplicable;
    std::string reason;
    double value = std::numeric_limits<double>::quiet_NaN();
    double threshold = std::numeric_limits<double>::quiet_NaN();
    /// Signed distance to the decision boundary; Holds iff margin > 0.
    double margin = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

struct CorollaryDef {
    int id;
    EstimatorKind inferior;
    EstimatorKind superior;
    PreconditionKind kind;
    // Unconditional: margin(k, d).
    // ScalarThreshold: lhs(k, d) and rhs(k, d).
    // LambdaStar: lhs = multiplier on max eig((P tau P) tau^-1), rhs unused.
    // ProjectedPD: lhs = scalar multiplying P tau P, rhs unused.
    std::function<double(double, double)> lhs;
    std::function<double(double, double)> rhs;
    const char* reason;
    // Closed-form D(i,j) as printed in the proof.
    std::function<Matrix(const CorollaryParams&, const CanonicalForm&)> closed_form;
};

inline Matrix scaled_tau(double coeff, const CanonicalForm& canon) {
    return coeff * canon.sigma2 * canon.tau_matrix();
}

inline Matrix projected_tau(const CanonicalForm& canon, Index h) {
    const Matrix p = component_projection(canon, h);
    return symmetrized(p * canon.tau.asDiagonal() * p);
}

inline const std::vector<CorollaryDef>& corollary_table() {
    using K = EstimatorKind;
    static const std::vector<CorollaryDef> table = [] {
        std::vector<CorollaryDef> t;
        auto add = [&t](CorollaryDef def) { t.push_back(std::move(def)); };

        // --- unconditional scalar-family pairs ------------------------------
        add({1, K::MRE, K::SRRE, PreconditionKind::Unconditional,
             [](double k, double) { return k; }, nullptr, "k > 0",
             [](const CorollaryParams& p, const CanonicalForm& c) {
                 const double k = p.k;
                 return scaled_tau(k * (2.0 + k) / std::pow(1.0 + k, 2), c);
             }});
        add({2, K::MRE, K::SRAURE, PreconditionKind::Unconditional,
             [](double k, double) { return k; }, nullptr, "k > 0",
             [](const CorollaryParams& p, const CanonicalForm& c) {
                 const double k = p.k;
                 return scaled_tau(k * k * (k * k + 4.0 * k + 2.0) / std::pow(1.0 + k, 4), c);
             }});
        add({3, K::MRE, K::SRLE, PreconditionKind::Unconditional,
             [](double, double d) { return 1.0 - d; }, nullptr, "0 < d < 1",
             [](const CorollaryParams& p, const CanonicalForm& c) {
                 const double d = p.d;
                 return scaled_tau(0.25 * (3.0 + d) * (1.0 - d), c);
             }});
        add({4, K::MRE, K::SRAULE, PreconditionKind::Unconditional,
             [](double, double d) { return 1.0 - d; }, nullptr, "0 < d < 1",
             [](const CorollaryParams& p, const CanonicalForm& c) {
                 const double d = p.d;
                 return scaled_tau((7.0 + 2.0 * d - d * d) * std::pow(1.0 - d, 2) / 16.0, c);
             }});
        add({8, K::SRAURE, K::SRRE, PreconditionKind::Unconditional,
             [](double k, double) { return k; }, nullptr, "k > 0",
             [](const CorollaryParams& p, const CanonicalForm& c) {
                 const double k = p.k;
                 return scaled_tau(k * (2.0 + 3.0 * k) / std::pow(1.0 + k, 4), c);
             }});
        add({19, K::SRAULE, K::SRLE, PreconditionKind::Unconditional,
             [](double, double d) { return 1.0 - d; }, nullptr, "0 < d < 1",
             [](const CorollaryParams& p, const CanonicalForm& c) {
                 const double d = p.d;
                 return scaled_tau((5.0 - d) * (1.0 - d) * std::pow(1.0 + d, 2) / 16.0, c);
             }});

        // --- scalar-threshold pairs ----------------------------------------
        add({9, K::SRLE, K::SRRE, PreconditionKind::ScalarThreshold,
             [](double k, double) { return k; },
             [](double, double d) { return (1.0 - d) / (1.0 + d); },
             "k > (1-d)/(1+d)",
             [](const CorollaryParams& p, const CanonicalForm& c) {
                 const double k = p.k, d = p.d;
                 const double s = k * (1.0 + d) + d;
                 return scaled_tau(0.25 * (s + 3.0) * (s - 1.0) / std::pow(1.0 + k, 2), c);
             }});
        add({10, K::SRAULE, K::SRRE, PreconditionKind::ScalarThreshold,
             [](double k, double) { return k; },
             [](double, double d) {
                 return std::pow(1.0 - d, 2) / ((1.0 + d) * (3.0 - d));
             },
             "k > (1-d)^2/((1+d)(3-d))",
             [](const CorollaryParams& p, const CanonicalForm& c) {
                 const double k = p.k, d = p.d;
                 const double a = 7.0 + 2.0 * d - d * d + k * (1.0 + d) * (3.0 - d);
                 const double b = k * (1.0 + d) * (3.0 - d) - std::pow(1.0 - d, 2);
                 return scaled_tau(a * b / (16.0 * std::pow(1.0 + k, 2)), c);
             }});
        add({14, K::SRLE, K::SRAURE, PreconditionKind::ScalarThreshold,
             [](double, double d) { return d; },
             [](double k, double) {
                 return (1.0 + 2.0 * k - k * k) / std::pow(1.0 + k, 2);
             },
             "d > (1+2k-k^2)/(1+k)^2",
             [](const CorollaryParams& p, const CanonicalForm& c) {
                 const double k = p.k, d = p.d;
                 const double a = 3.0 + 6.0 * k + k * k + d * std::pow(1.0 + k, 2);
                 const double b = k * k - 2.0 * k - 1.0 + d * std::pow(1.0 + k, 2);
                 return scaled_tau(a * b / (4.0 * std::pow(1.0 + k, 4)), c);
             }});
        add({15, K::SRAULE, K::SRAURE, PreconditionKind::ScalarThreshold,
             [](double, double d) { return (1.0 + d) * (3.0 - d); },
             [](double k, double) {
                 return 4.0 * (1.0 + 2.0 * k) / std::pow(1.0 + k, 2);
             },
             "(1+d)(3-d) > 4(1+2k)/(1+k)^2",
             [](const CorollaryParams& p, const CanonicalForm& c) {
                 const double k = p.k, d = p.d;
                 const double w = std::pow(1.0 + k, 2) * (1.0 + d) * (3.0 - d);
                 const double v = 4.0 * (1.0 + 2.0 * k);
                 return scaled_tau((w + v) * (w - v) / (16.0 * std::pow(1.0 + k, 4)), c);
             }});

        // --- lambda-star pairs (projection involved on one side) -----------
        auto lam = [&add](int id, K inferior, K superior,
                          std::function<double(double, double)> coef, const char* reason,
                          std::function<Matrix(const CorollaryParams&, const CanonicalForm&)> cf) {
            add({id, inferior, superior, PreconditionKind::LambdaStar, std::move(coef), nullptr,
                 reason, std::move(cf)});
        };
        lam(5, K::MRE, K::SRPCR, [](double, double) { return 1.0; },
            "lambda* of (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                return Matrix(c.sigma2 * (c.tau_matrix() - projected_tau(c, p.h)));
            });
        lam(6, K::MRE, K::SRrk,
            [](double k, double) { return 1.0 / std::pow(1.0 + k, 2); },
            "lambda* of (1+k)^-2 (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                return Matrix(c.sigma2 * (c.tau_matrix() -
                                          projected_tau(c, p.h) / std::pow(1.0 + p.k, 2)));
            });
        lam(7, K::MRE, K::SRrd,
            [](double, double d) { return std::pow(1.0 + d, 2) / 4.0; },
            "lambda* of 2^-2 (1+d)^2 (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                return Matrix(c.sigma2 * (c.tau_matrix() -
                                          std::pow(1.0 + p.d, 2) / 4.0 * projected_tau(c, p.h)));
            });
        lam(11, K::SRRE, K::SRPCR,
            [](double k, double) { return std::pow(1.0 + k, 2); },
            "lambda* of (1+k)^2 (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                return Matrix(c.sigma2 * (c.tau_matrix() / std::pow(1.0 + p.k, 2) -
                                          projected_tau(c, p.h)));
            });
        lam(12, K::SRRE, K::SRrk, [](double, double) { return 1.0; },
            "lambda* of (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                return Matrix(c.sigma2 / std::pow(1.0 + p.k, 2) *
                              (c.tau_matrix() - projected_tau(c, p.h)));
            });
        lam(13, K::SRRE, K::SRrd,
            [](double k, double d) {
                return std::pow(1.0 + d, 2) * std::pow(1.0 + k, 2) / 4.0;
            },
            "lambda* of 2^-2 (1+d)^2 (1+k)^2 (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                return Matrix(c.sigma2 * (c.tau_matrix() / std::pow(1.0 + p.k, 2) -
                                          std::pow(1.0 + p.d, 2) / 4.0 * projected_tau(c, p.h)));
            });
        lam(16, K::SRAURE, K::SRPCR,
            [](double k, double) {
                return std::pow(1.0 + k, 4) / std::pow(1.0 + 2.0 * k, 2);
            },
            "lambda* of (1+k)^4 (1+2k)^-2 (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                const double s = std::pow(1.0 + 2.0 * p.k, 2) / std::pow(1.0 + p.k, 4);
                return Matrix(c.sigma2 * (s * c.tau_matrix() - projected_tau(c, p.h)));
            });
        lam(17, K::SRAURE, K::SRrk,
            [](double k, double) {
                return std::pow(1.0 + k, 2) / std::pow(1.0 + 2.0 * k, 2);
            },
            "lambda* of (1+2k)^-2 (1+k)^2 (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                const double k = p.k;
                return Matrix(c.sigma2 / std::pow(1.0 + k, 4) *
                              (std::pow(1.0 + 2.0 * k, 2) * c.tau_matrix() -
                               std::pow(1.0 + k, 2) * projected_tau(c, p.h)));
            });
        lam(18, K::SRAURE, K::SRrd,
            [](double k, double d) {
                return std::pow(1.0 + d, 2) * std::pow(1.0 + k, 4) /
                       (4.0 * std::pow(1.0 + 2.0 * k, 2));
            },
            "lambda* of 2^-2 (1+d)^2 (1+k)^4 (1+2k)^-2 (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                const double s = std::pow(1.0 + 2.0 * p.k, 2) / std::pow(1.0 + p.k, 4);
                return Matrix(c.sigma2 * (s * c.tau_matrix() -
                                          std::pow(1.0 + p.d, 2) / 4.0 * projected_tau(c, p.h)));
            });
        lam(20, K::SRLE, K::SRPCR,
            [](double, double d) { return 4.0 / std::pow(1.0 + d, 2); },
            "lambda* of 2^2 (1+d)^-2 (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                return Matrix(c.sigma2 * (std::pow(1.0 + p.d, 2) / 4.0 * c.tau_matrix() -
                                          projected_tau(c, p.h)));
            });
        lam(21, K::SRLE, K::SRrk,
            [](double k, double d) {
                return 4.0 / (std::pow(1.0 + d, 2) * std::pow(1.0 + k, 2));
            },
            "lambda* of 2^2 (1+d)^-2 (1+k)^-2 (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                return Matrix(c.sigma2 * (std::pow(1.0 + p.d, 2) / 4.0 * c.tau_matrix() -
                                          projected_tau(c, p.h) / std::pow(1.0 + p.k, 2)));
            });
        lam(22, K::SRLE, K::SRrd, [](double, double) { return 1.0; },
            "lambda* of (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                return Matrix(c.sigma2 * std::pow(1.0 + p.d, 2) / 4.0 *
                              (c.tau_matrix() - projected_tau(c, p.h)));
            });
        lam(23, K::SRAULE, K::SRPCR,
            [](double, double d) {
                return 16.0 / (std::pow(1.0 + d, 2) * std::pow(3.0 - d, 2));
            },
            "lambda* of 2^4 (1+d)^-2 (3-d)^-2 (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                const double s = std::pow(1.0 + p.d, 2) * std::pow(3.0 - p.d, 2) / 16.0;
                return Matrix(c.sigma2 * (s * c.tau_matrix() - projected_tau(c, p.h)));
            });
        lam(24, K::SRAULE, K::SRrk,
            [](double k, double d) {
                return 16.0 /
                       (std::pow(1.0 + d, 2) * std::pow(3.0 - d, 2) * std::pow(1.0 + k, 2));
            },
            "lambda* of 2^4 (1+d)^-2 (3-d)^-2 (1+k)^-2 (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                const double s = std::pow(1.0 + p.d, 2) * std::pow(3.0 - p.d, 2) / 16.0;
                return Matrix(c.sigma2 * (s * c.tau_matrix() -
                                          projected_tau(c, p.h) / std::pow(1.0 + p.k, 2)));
            });
        lam(25, K::SRAULE, K::SRrd,
            [](double, double d) { return 4.0 / std::pow(3.0 - d, 2); },
            "lambda* of 2^2 (3-d)^-2 (P tau P) tau^-1 < 1",
            [](const CorollaryParams& p, const CanonicalForm& c) {
                return Matrix(c.sigma2 * std::pow(1.0 + p.d, 2) / 16.0 *
                              (std::pow(3.0 - p.d, 2) * c.tau_matrix() -
                               4.0 * projected_tau(c, p.h)));
            });

        // --- projection-only pairs ------------------------------------------
        add({26, K::SRPCR, K::SRrk, PreconditionKind::ProjectedPD,
             [](double, double) { return 1.0; }, nullptr, "P tau P positive definite",
             [](const CorollaryParams& p, const CanonicalForm& c) {
                 const double k = p.k;
                 return Matrix(k * (2.0 + k) / std::pow(1.0 + k, 2) * c.sigma2 *
                               projected_tau(c, p.h));
             }});
        add({27, K::SRPCR, K::SRrd, PreconditionKind::ProjectedPD,
             [](double, double) { return 1.0; }, nullptr, "P tau P positive definite",
             [](const CorollaryParams& p, const CanonicalForm& c) {
                 const double d = p.d;
                 return Matrix(0.25 * (3.0 + d) * (1.0 - d) * c.sigma2 * projected_tau(c, p.h));
             }});
        add({28, K::SRrd, K::SRrk, PreconditionKind::ProjectedPD,
             [](double k, double d) { return k * (1.0 + d) + d - 1.0; }, nullptr,
             "(k(1+d)+d-1) P tau P positive definite",
             [](const CorollaryParams& p, const CanonicalForm& c) {
                 const double s = p.k * (1.0 + p.d) + p.d;
                 return Matrix(0.25 * (s + 3.0) * (s - 1.0) / std::pow(1.0 + p.k, 2) * c.sigma2 *
                               projected_tau(c, p.h));
             }});
        return t;
    }();
    return table;
}

inline const CorollaryDef* find_corollary(EstimatorKind i, EstimatorKind j) {
    for (const auto& def : corollary_table())
        if (def.inferior == i && def.superior == j) return &def;
    return nullptr;
}

}  // namespace detail

/// Closed-form D(i,j) as printed in the proof of the given corollary.
inline Matrix closed_form_dispersion_difference(int corollary_id, const CorollaryParams& params,
                                                const CanonicalForm& canon) {
    for (const auto& def : detail::corollary_table())
        if (def.id == corollary_id) return def.closed_form(params, canon);
    throw UnknownPair("closed_form_dispersion_difference: no corollary with id " +
                      std::to_string(corollary_id));
}

/// The ordered pair (inferior, superior) a corollary covers.
inline std::pair<EstimatorKind, EstimatorKind> corollary_pair(int corollary_id) {
    for (const auto& def : detail::corollary_table())
        if (def.id == corollary_id) return {def.inferior, def.superior};
    throw UnknownPair("corollary_pair: no corollary with id " + std::to_string(corollary_id));
}

/// Evaluates the closed-form precondition of the corollary covering the
/// ordered pair (i, j); pairs printed only in the reverse direction come back
/// NotApplicable, anything else is UnknownPair.
inline PreconditionRecord corollary_precondition(EstimatorKind i, EstimatorKind j,
                                                 const CorollaryParams& params,
                                                 const CanonicalForm& canon,
                                                 const Tolerances& tol = {}) {
    const detail::CorollaryDef* def = detail::find_corollary(i, j);
    if (!def) {
        if (const detail::CorollaryDef* reverse = detail::find_corollary(j, i)) {
            PreconditionRecord rec;
            rec.corollary = reverse->id;
            rec.status = PreconditionStatus::NotApplicable;
            rec.reason = std::string("covered only in the reverse direction (C") +
                         std::to_string(reverse->id) + ")";
            return rec;
        }
        throw UnknownPair(std::string("corollary_precondition: pair ") + to_string(i) + " -> " +
                          to_string(j) + " is not covered by C1-C28");
    }

    PreconditionRecord rec;
    rec.corollary = def->id;
    rec.reason = def->reason;
    switch (def->kind) {
        case PreconditionKind::Unconditional: {
            rec.value = def->lhs(params.k, params.d);
            rec.threshold = 0.0;
            rec.margin = rec.value;
            rec.status = PreconditionStatus::Holds;  // holds on the valid parameter domain
            break;
        }
        case PreconditionKind::ScalarThreshold: {
            rec.value = def->lhs(params.k, params.d);
            rec.threshold = def->rhs(params.k, params.d);
            rec.margin = rec.value - rec.threshold;
            rec.status = rec.margin > 0.0 ? PreconditionStatus::Holds : PreconditionStatus::Fails;
            break;
        }
        case PreconditionKind::LambdaStar: {
            const double base = largest_relative_eigenvalue(
                detail::projected_tau(canon, params.h), canon.tau_matrix(), tol);
            rec.value = def->lhs(params.k, params.d) * base;
            rec.threshold = 1.0;
            rec.margin = 1.0 - rec.value;
            rec.status = rec.value < 1.0 ? PreconditionStatus::Holds : PreconditionStatus::Fails;
            break;
        }
        case PreconditionKind::ProjectedPD: {
            const double scalar = def->lhs(params.k, params.d);
            const Matrix m = scalar * detail::projected_tau(canon, params.h);
            Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m), Eigen::EigenvaluesOnly);
            rec.value = es.eigenvalues().minCoeff();
            rec.threshold = tol.pd_rel * detail::eig_scale(es.eigenvalues());
            rec.margin = rec.value - rec.threshold;
            rec.status = rec.margin > 0.0 ? PreconditionStatus::Holds : PreconditionStatus::Fails;
            break;
        }
    }
    return rec;
}

/// Verdicts for every ordered pair of specs; the diagonal is Inconclusive by
/// definition.
inline std::vector<std::vector<ComparisonVerdict>> pairwise_matrix(
    const std::vector<EstimatorSpec>& specs, const CanonicalForm& canon, const Vector& delta,
    ComparisonLevel level, const Tolerances& tol = {}) {
    if (specs.size() < 2) throw ValidationError("pairwise_matrix: need at least two specs");
    std::vector<std::vector<ComparisonVerdict>> grid(specs.size());
    for (std::size_t a = 0; a < specs.size(); ++a) {
        for (std::size_t b = 0; b < specs.size(); ++b) {
            if (a == b) {
                ComparisonVerdict self;
                self.label_i = specs[a].label();
                self.label_j = specs[b].label();
                self.level = level;
                self.precondition = PreconditionStatus::NotApplicable;
                self.precondition_reason = "self-comparison";
                self.verdict = Verdict::Inconclusive;
                grid[a].push_back(std::move(self));
                continue;
            }
            grid[a].push_back(level == ComparisonLevel::Estimator
                                  ? theorem1_compare(specs[a], specs[b], canon, tol)
                                  : theorem2_compare(specs[a], specs[b], canon, delta, tol));
        }
    }
    return grid;
}

}  // namespace srbe
