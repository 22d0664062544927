#pragma once

#include "srbe/canonical.hpp"

#include <array>
#include <string>
#include <vector>

namespace srbe {

// ---------------------------------------------------------------------------
// The estimator family. Every member is a left factor applied to the
// canonical MRE:   gamma_hat_(j) = G_(j) * gamma_hat_MRE.
//
//   MRE     G = I
//   SRRE    G = I / (1+k)
//   SRAURE  G = I (1+2k) / (1+k)^2
//   SRLE    G = I (1+d) / 2
//   SRAULE  G = I (1+d)(3-d) / 4
//   SRPCR   G = Th Th'              (Th: first h eigenvectors of X1'X1)
//   SRrk    G = Th Th' / (1+k)
//   SRrd    G = Th Th' (1+d) / 2
// ---------------------------------------------------------------------------

enum class EstimatorKind { MRE, SRRE, SRAURE, SRLE, SRAULE, SRPCR, SRrk, SRrd };

constexpr std::array<EstimatorKind, 8> all_estimator_kinds = {
    EstimatorKind::MRE,   EstimatorKind::SRRE, EstimatorKind::SRAURE,
    EstimatorKind::SRLE,  EstimatorKind::SRAULE, EstimatorKind::SRPCR,
    EstimatorKind::SRrk,  EstimatorKind::SRrd};

inline const char* to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::MRE: return "MRE";
        case EstimatorKind::SRRE: return "SRRE";
        case EstimatorKind::SRAURE: return "SRAURE";
        case EstimatorKind::SRLE: return "SRLE";
        case EstimatorKind::SRAULE: return "SRAULE";
        case EstimatorKind::SRPCR: return "SRPCR";
        case EstimatorKind::SRrk: return "SRrk";
        case EstimatorKind::SRrd: return "SRrd";
    }
    return "?";
}

inline std::optional<EstimatorKind> estimator_kind_from_string(const std::string& name) {
    for (EstimatorKind kind : all_estimator_kinds)
        if (name == to_string(kind)) return kind;
    return std::nullopt;
}

inline bool uses_ridge_parameter(EstimatorKind k) {
    return k == EstimatorKind::SRRE || k == EstimatorKind::SRAURE || k == EstimatorKind::SRrk;
}

inline bool uses_liu_parameter(EstimatorKind k) {
    return k == EstimatorKind::SRLE || k == EstimatorKind::SRAULE || k == EstimatorKind::SRrd;
}

inline bool uses_components(EstimatorKind k) {
    return k == EstimatorKind::SRPCR || k == EstimatorKind::SRrk || k == EstimatorKind::SRrd;
}

// Scalar shrinkage factors.
inline double ridge_factor(double k) { return 1.0 / (1.0 + k); }                      // C_k
inline double almost_unbiased_ridge_factor(double k) {                                // C_k*
    return (1.0 + 2.0 * k) / ((1.0 + k) * (1.0 + k));
}
inline double liu_factor(double d) { return 0.5 * (1.0 + d); }                        // C_d
inline double almost_unbiased_liu_factor(double d) {                                  // C_d*
    return 0.25 * (1.0 + d) * (3.0 - d);
}

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::MRE;
    std::optional<double> k;   // ridge parameter, > 0
    std::optional<double> d;   // Liu parameter, in (0, 1)
    std::optional<Index> h;    // retained principal components, in [1, l]

    static EstimatorSpec mre() { return {EstimatorKind::MRE, {}, {}, {}}; }

    static EstimatorSpec make(EstimatorKind kind, std::optional<double> k = {},
                              std::optional<double> d = {}, std::optional<Index> h = {}) {
        EstimatorSpec s;
        s.kind = kind;
        s.k = k;
        s.d = d;
        s.h = h;
        return s;
    }

    /// Parameters irrelevant to the kind are ignored but still validated
    /// when present.
    void validate(Index l) const {
        if (k && !(*k > 0.0)) throw InvalidShrinkage("EstimatorSpec: k must be > 0");
        if (d && !(*d > 0.0 && *d < 1.0))
            throw InvalidShrinkage("EstimatorSpec: d must lie in (0, 1)");
        if (h && !(*h >= 1 && *h <= l))
            throw InvalidShrinkage("EstimatorSpec: h must lie in [1, l]");
        if (uses_ridge_parameter(kind) && !k)
            throw InvalidShrinkage(std::string(to_string(kind)) + " requires parameter k");
        if (uses_liu_parameter(kind) && !d)
            throw InvalidShrinkage(std::string(to_string(kind)) + " requires parameter d");
        if (uses_components(kind) && !h)
            throw InvalidShrinkage(std::string(to_string(kind)) + " requires parameter h");
    }

    std::string label() const {
        std::string s = to_string(kind);
        bool first = true;
        auto add = [&](const std::string& t) {
            s += first ? "(" : ";";
            s += t;
            first = false;
        };
        if (uses_ridge_parameter(kind) && k) add("k=" + std::to_string(*k));
        if (uses_liu_parameter(kind) && d) add("d=" + std::to_string(*d));
        if (uses_components(kind) && h) add("h=" + std::to_string(*h));
        if (!first) s += ")";
        return s;
    }
};

/// Projection onto the span of the leading h eigenvectors of X1'X1.
inline Matrix component_projection(const CanonicalForm& canon, Index h) {
    const Matrix t_h = canon.eigbasis.leftCols(h);
    return t_h * t_h.transpose();
}

/// The factor matrix G_(j).
inline Matrix factor_matrix(const EstimatorSpec& spec, const CanonicalForm& canon) {
    const Index l = canon.l();
    spec.validate(l);
    switch (spec.kind) {
        case EstimatorKind::MRE:
            return Matrix::Identity(l, l);
        case EstimatorKind::SRRE:
            return ridge_factor(*spec.k) * Matrix::Identity(l, l);
        case EstimatorKind::SRAURE:
            return almost_unbiased_ridge_factor(*spec.k) * Matrix::Identity(l, l);
        case EstimatorKind::SRLE:
            return liu_factor(*spec.d) * Matrix::Identity(l, l);
        case EstimatorKind::SRAULE:
            return almost_unbiased_liu_factor(*spec.d) * Matrix::Identity(l, l);
        case EstimatorKind::SRPCR:
            return component_projection(canon, *spec.h);
        case EstimatorKind::SRrk:
            return ridge_factor(*spec.k) * component_projection(canon, *spec.h);
        case EstimatorKind::SRrd:
            return liu_factor(*spec.d) * component_projection(canon, *spec.h);
    }
    throw Error("factor_matrix: unreachable");
}

/// Canonical MRE: gamma_hat = tau .* (X*'y + R*'W^-1 r).
inline Vector estimate_mre(const CanonicalForm& canon, const SampleModel& model,
                           const RestrictionSystem& restriction) {
    if (model.y.size() != canon.n())
        throw DimensionMismatch("estimate_mre: response length != canonical n");
    if (restriction.r.size() != canon.r_star.rows())
        throw DimensionMismatch("estimate_mre: restriction size mismatch");
    const Vector stacked = canon.x_star.transpose() * model.y +
                           canon.r_star.transpose() * restriction.W.llt().solve(restriction.r);
    return canon.tau.cwiseProduct(stacked);
}

/// gamma_hat_(j) = G_(j) * gamma_hat_MRE; the MRE spec returns the MRE
/// estimate itself.
inline Vector estimate(const EstimatorSpec& spec, const CanonicalForm& canon,
                       const SampleModel& model, const RestrictionSystem& restriction) {
    const Vector mre = estimate_mre(canon, model, restriction);
    if (spec.kind == EstimatorKind::MRE) {
        spec.validate(canon.l());
        return mre;
    }
    return factor_matrix(spec, canon) * mre;
}

// ---------------------------------------------------------------------------
// Exact moments.
//
//   bias       = (G - I) gamma + G tau drift
//   dispersion = sigma2 * G diag(tau) G'
//   msem       = dispersion + bias bias'
// ---------------------------------------------------------------------------

struct EstimatorMoments {
    Vector bias;
    Matrix dispersion;
    Matrix msem;
    double smse = 0.0;
};

inline EstimatorMoments moments(const EstimatorSpec& spec, const CanonicalForm& canon) {
    const Matrix g_factor = factor_matrix(spec, canon);
    EstimatorMoments out;
    out.bias = (g_factor - Matrix::Identity(canon.l(), canon.l())) * canon.gamma +
               g_factor * canon.tau.cwiseProduct(canon.drift);
    out.dispersion = canon.sigma2 * g_factor * canon.tau.asDiagonal() * g_factor.transpose();
    out.msem = out.dispersion + out.bias * out.bias.transpose();
    out.smse = out.msem.trace();
    return out;
}

inline double smse(const EstimatorSpec& spec, const CanonicalForm& canon) {
    return moments(spec, canon).smse;
}

// ---------------------------------------------------------------------------
// SMSE grids (one row per estimator kind, one column per shared k/d value).
// ---------------------------------------------------------------------------

struct SmseTable {
    std::vector<std::string> row_names;
    std::vector<double> grid;
    Matrix values;  // row_names.size() x grid.size()
};

/// Instantiates a template spec at a grid point: the shared value feeds k for
/// ridge-type rows and d for Liu-type rows; other parameters pass through.
inline EstimatorSpec at_grid_point(const EstimatorSpec& tmpl, double value) {
    EstimatorSpec s = tmpl;
    if (uses_ridge_parameter(s.kind)) s.k = value;
    if (uses_liu_parameter(s.kind)) s.d = value;
    return s;
}

inline SmseTable smse_grid(const std::vector<EstimatorSpec>& kinds,
                           const std::vector<double>& grid, const CanonicalForm& canon) {
    if (grid.empty()) throw EmptyGrid("smse_grid: grid must be nonempty");
    for (double v : grid)
        if (!(v > 0.0 && v < 1.0)) throw ValidationError("smse_grid: grid values must lie in (0, 1)");
    SmseTable table;
    table.grid = grid;
    table.values.resize(static_cast<Index>(kinds.size()), static_cast<Index>(grid.size()));
    for (std::size_t row = 0; row < kinds.size(); ++row) {
        table.row_names.push_back(to_string(kinds[row].kind));
        for (std::size_t col = 0; col < grid.size(); ++col)
            table.values(static_cast<Index>(row), static_cast<Index>(col)) =
                smse(at_grid_point(kinds[row], grid[col]), canon);
    }
    return table;
}

/// Default shrinkage grid 0.1, 0.2, ..., 0.9.
inline std::vector<double> default_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
    return g;
}

/// All eight estimators as grid templates with the given component count.
inline std::vector<EstimatorSpec> default_family(Index h) {
    std::vector<EstimatorSpec> specs;
    for (EstimatorKind kind : all_estimator_kinds) {
        EstimatorSpec s;
        s.kind = kind;
        if (uses_ridge_parameter(kind)) s.k = 0.5;  // placeholder, replaced per grid point
        if (uses_liu_parameter(kind)) s.d = 0.5;
        if (uses_components(kind)) s.h = h;
        specs.push_back(s);
    }
    return specs;
}

}  // namespace srbe
