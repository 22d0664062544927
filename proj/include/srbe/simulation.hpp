#pragma once

#include "srbe/comparison.hpp"
#include "srbe/rng.hpp"

namespace srbe {

// ---------------------------------------------------------------------------
// Monte Carlo engine.
//
// Collinear designs follow McDonald & Galarneau:
//     x_ij = sqrt(1 - rho^2) z_ij + rho z_im,
// so the last column shares its noise with every other column and carries the
// dominant VIF. The response is y = x beta + eps with beta the unit top
// eigenvector of x'x. Per replicate the engine evaluates the *analytic* SMSE
// traces at the true parameters; randomness enters only through the design.
// ---------------------------------------------------------------------------

struct SimConfig {
    Index n = 50;
    Index m = 5;
    Index l = 5;
    Index p = 0;
    double rho = 0.9;
    Index reps = 2000;
    std::uint64_t seed = 0;
    std::vector<double> grid = default_grid();
    RestrictionSystem restriction;  // template over all m regressors
    std::optional<Index> components;  // h; defaults to l - 1

    Index h() const { return components ? *components : std::max<Index>(1, l - 1); }

    void validate() const {
        if (!(n > m && m >= l && l >= 1)) throw ValidationError("SimConfig: need n > m >= l >= 1");
        if (l + p != m) throw ValidationError("SimConfig: need l + p = m");
        if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("SimConfig: rho must lie in (0, 1)");
        if (reps < 1) throw ValidationError("SimConfig: reps must be >= 1");
        if (grid.empty()) throw EmptyGrid("SimConfig: grid must be nonempty");
        for (double v : grid)
            if (!(v > 0.0 && v < 1.0))
                throw ValidationError("SimConfig: grid values must lie in (0, 1)");
        if (restriction.R.cols() != m)
            throw DimensionMismatch("SimConfig: restriction template must have m columns");
        if (components && !(*components >= 1 && *components <= l))
            throw ValidationError("SimConfig: components must lie in [1, l]");
    }
};

struct SimResult {
    SmseTable estimator_smse;
    SmseTable predictor_smse;
    Matrix estimator_se;  // per-cell standard error of the replicate mean
    Matrix predictor_se;
    double mean_condition_number = 0.0;
    Vector mean_vif;
    Index resampled = 0;
    Index reps = 0;
};

/// One McDonald-Galarneau design draw; consumes exactly n*m normals.
inline Matrix generate_design(Index n, Index m, double rho, NormalStream& stream) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw ValidationError("generate_design: rho must lie in [0, 1)");
    Matrix z(n, m);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j) z(i, j) = stream.next();
    const double mix = std::sqrt(1.0 - rho * rho);
    Matrix x(n, m);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j) x(i, j) = mix * z(i, j) + rho * z(i, m - 1);
    return x;
}

/// Response draw: beta is the sign-fixed unit top eigenvector of x'x and
/// y = x beta + eps with unit-variance errors. Consumes exactly n normals.
inline std::pair<Vector, Vector> generate_response(const Matrix& x, NormalStream& stream) {
    Eigen::JacobiSVD<Matrix> svd(x);
    if (svd.singularValues().minCoeff() < 1e-10 * svd.singularValues().maxCoeff())
        throw RankDeficientDesign("generate_response: design is numerically rank deficient");
    auto [values, vectors] = eigen_sym_descending(x.transpose() * x);
    const Vector beta = vectors.col(0);
    Vector y = x * beta;
    for (Index i = 0; i < y.size(); ++i) y[i] += stream.next();
    return {std::move(y), beta};
}

namespace detail {

struct ReplicateTables {
    Matrix estimator;  // kinds x grid
    Matrix predictor;
    double condition_number = 0.0;
    Vector vif;
};

inline ReplicateTables evaluate_replicate(const SimConfig& config, NormalStream& stream) {
    const Matrix x = generate_design(config.n, config.m, config.rho, stream);
    auto [y, beta] = generate_response(x, stream);

    SampleModel model;
    model.y = y;
    model.x_included = x.leftCols(config.l);
    model.x_omitted = x.rightCols(config.p);
    model.beta_included = beta.head(config.l);
    model.beta_omitted = beta.tail(config.p);
    model.sigma2 = 1.0;

    RestrictionSystem restriction = config.restriction;
    restriction.R = config.restriction.R.leftCols(config.l);
    restriction.r = restriction.R * (*model.beta_included) + restriction.g;

    const CanonicalForm canon = build_canonical(model, restriction);
    const Vector delta = model.drift_vector();
    const std::vector<EstimatorSpec> family = default_family(config.h());

    ReplicateTables tables;
    tables.estimator.resize(static_cast<Index>(family.size()),
                            static_cast<Index>(config.grid.size()));
    tables.predictor.resizeLike(tables.estimator);
    for (std::size_t row = 0; row < family.size(); ++row) {
        for (std::size_t col = 0; col < config.grid.size(); ++col) {
            const EstimatorSpec spec = at_grid_point(family[row], config.grid[col]);
            const EstimatorMoments est = moments(spec, canon);
            tables.estimator(static_cast<Index>(row), static_cast<Index>(col)) = est.smse;
            const Vector projected = canon.x_star.transpose() * delta;
            tables.predictor(static_cast<Index>(row), static_cast<Index>(col)) =
                est.smse - 2.0 * projected.dot(est.bias) + delta.squaredNorm();
        }
    }
    const DesignDiagnostics diag = design_diagnostics(x);
    tables.condition_number = diag.condition_number;
    tables.vif = diag.vif;
    return tables;
}

}  // namespace detail

inline SimResult run_monte_carlo(const SimConfig& config) {
    config.validate();
    const std::vector<EstimatorSpec> family = default_family(config.h());
    const Index rows = static_cast<Index>(family.size());
    const Index cols = static_cast<Index>(config.grid.size());

    Matrix est_sum = Matrix::Zero(rows, cols), est_sumsq = Matrix::Zero(rows, cols);
    Matrix pred_sum = Matrix::Zero(rows, cols), pred_sumsq = Matrix::Zero(rows, cols);
    double cond_sum = 0.0;
    Vector vif_sum = Vector::Zero(config.m);
    Index resampled = 0;
    const Index resample_cap = std::max<Index>(1, config.reps / 100);

    for (Index rep = 0; rep < config.reps; ++rep) {
        Index attempt = 0;
        for (;;) {
            NormalStream stream(config.seed,
                                static_cast<std::uint64_t>(rep + attempt * config.reps));
            try {
                const detail::ReplicateTables t = detail::evaluate_replicate(config, stream);
                est_sum += t.estimator;
                est_sumsq += t.estimator.cwiseProduct(t.estimator);
                pred_sum += t.predictor;
                pred_sumsq += t.predictor.cwiseProduct(t.predictor);
                cond_sum += t.condition_number;
                vif_sum += t.vif;
                break;
            } catch (const RankDeficientDesign&) {
                ++attempt;
                if (++resampled > resample_cap)
                    throw Error("run_monte_carlo: rank-deficient designs exceeded 1% of reps");
            }
        }
    }

    const double inv_reps = 1.0 / static_cast<double>(config.reps);
    SimResult result;
    result.reps = config.reps;
    result.resampled = resampled;
    result.estimator_smse.grid = config.grid;
    result.predictor_smse.grid = config.grid;
    for (const EstimatorSpec& spec : family) {
        result.estimator_smse.row_names.push_back(to_string(spec.kind));
        result.predictor_smse.row_names.push_back(to_string(spec.kind));
    }
    result.estimator_smse.values = est_sum * inv_reps;
    result.predictor_smse.values = pred_sum * inv_reps;

    auto standard_error = [&](const Matrix& mean, const Matrix& sumsq) {
        Matrix se(rows, cols);
        for (Index r = 0; r < rows; ++r)
            for (Index c = 0; c < cols; ++c) {
                const double var =
                    std::max(0.0, sumsq(r, c) * inv_reps - mean(r, c) * mean(r, c));
                se(r, c) = std::sqrt(var * inv_reps);
            }
        return se;
    };
    result.estimator_se = standard_error(result.estimator_smse.values, est_sumsq);
    result.predictor_se = standard_error(result.predictor_smse.values, pred_sumsq);
    result.mean_condition_number = cond_sum * inv_reps;
    result.mean_vif = vif_sum * inv_reps;
    return result;
}

/// Default simulation restriction over m regressors: a single row of ones
/// with unit misspecification and identity scale.
inline RestrictionSystem default_sim_restriction(Index m) {
    RestrictionSystem rs;
    rs.R = Matrix::Ones(1, m);
    rs.g = Vector::Constant(1, 1.0);
    rs.r = Vector::Zero(1);  // synthesized per replicate
    rs.W = Matrix::Identity(1, 1);
    return rs;
}

}  // namespace srbe
