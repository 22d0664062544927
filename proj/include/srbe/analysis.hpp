#pragma once

#include "srbe/datasets.hpp"
#include "srbe/predictors.hpp"

namespace srbe {

// ---------------------------------------------------------------------------
// Data-analysis mode: fit a dataset under an (l, p) scenario where the first
// l regressors stay in the model and the next p are treated as omitted.
//
// Unknowns are replaced by full-model OLS plug-ins: beta_hat over all l + p
// regressors is split into kept/omitted parts, delta_hat = X2 beta2_hat, and
// sigma2_hat is the full-model residual variance. The restriction template is
// truncated to the first l columns for reduced fits.
// ---------------------------------------------------------------------------

struct OlsFit {
    Vector beta;
    double sigma2 = 0.0;  // RSS / (n - k)
    Vector residuals;
};

inline OlsFit ols_fit(const Vector& y, const Matrix& x) {
    if (y.size() != x.rows()) throw DimensionMismatch("ols_fit: response length != rows");
    if (x.rows() <= x.cols()) throw ValidationError("ols_fit: need n > k for a variance estimate");
    Eigen::ColPivHouseholderQR<Matrix> qr(x);
    if (qr.rank() < x.cols()) throw RankDeficientDesign("ols_fit: rank-deficient design");
    OlsFit fit;
    fit.beta = qr.solve(y);
    fit.residuals = y - x * fit.beta;
    fit.sigma2 = fit.residuals.squaredNorm() / static_cast<double>(x.rows() - x.cols());
    return fit;
}

struct Scenario {
    Index l = 0;
    Index p = 0;
};

struct AnalysisOptions {
    Scenario scenario;
    std::vector<double> grid = default_grid();
    std::optional<Index> components;       // h, defaults to l - 1
    std::optional<double> sigma2_override; // defaults to full-model OLS estimate

    Index h(Index l) const { return components ? *components : std::max<Index>(1, l - 1); }
};

struct AnalysisResult {
    Scenario scenario;
    CanonicalForm canon;
    Vector delta;          // plug-in X2 beta2_hat
    OlsFit full_model;     // OLS over all l + p regressors
    double sigma2 = 0.0;   // value actually used
    SmseTable estimator_smse;
    SmseTable predictor_smse;
};

/// Restriction template for the worked example: one row with weights
/// (1, -2, -2, -2), unit misspecification and identity scale.
inline RestrictionSystem worked_example_restriction() {
    RestrictionSystem rs;
    rs.R.resize(1, 4);
    rs.R << 1.0, -2.0, -2.0, -2.0;
    rs.g = Vector::Constant(1, 1.0);
    rs.r = Vector();  // empty: synthesized as R b1_hat + g
    rs.W = Matrix::Identity(1, 1);
    return rs;
}

/// Truncates a restriction template to the first l regressors and fills a
/// missing r with the plug-in R b1 + g.
inline RestrictionSystem resolve_restriction(const RestrictionSystem& tmpl, Index l,
                                             const Vector& beta_included) {
    RestrictionSystem rs = tmpl;
    if (tmpl.R.cols() < l)
        throw DimensionMismatch("restriction template has fewer columns than kept regressors");
    rs.R = tmpl.R.leftCols(l);
    if (rs.r.size() == 0) rs.r = rs.R * beta_included + rs.g;
    rs.validate();
    return rs;
}

inline AnalysisResult analyze_dataset(const Dataset& ds, const RestrictionSystem& restriction_tmpl,
                                      const AnalysisOptions& options) {
    ds.validate();
    const Index l = options.scenario.l;
    const Index p = options.scenario.p;
    if (l < 1 || p < 0 || l + p > ds.m())
        throw ValidationError("analyze_dataset: scenario (l, p) incompatible with dataset");

    AnalysisResult result;
    result.scenario = options.scenario;
    result.full_model = ols_fit(ds.y, ds.x.leftCols(l + p));
    result.sigma2 = options.sigma2_override.value_or(result.full_model.sigma2);

    SampleModel model;
    model.y = ds.y;
    model.x_included = ds.x.leftCols(l);
    model.x_omitted = ds.x.middleCols(l, p);
    model.beta_included = result.full_model.beta.head(l);
    model.beta_omitted = result.full_model.beta.tail(p);
    model.sigma2 = result.sigma2;

    const RestrictionSystem restriction =
        resolve_restriction(restriction_tmpl, l, *model.beta_included);
    result.canon = build_canonical(model, restriction);
    result.delta = model.drift_vector();

    const std::vector<EstimatorSpec> family = default_family(options.h(l));
    result.estimator_smse = smse_grid(family, options.grid, result.canon);
    result.predictor_smse = predictor_smse_grid(family, options.grid, result.canon, result.delta);
    return result;
}

}  // namespace srbe
