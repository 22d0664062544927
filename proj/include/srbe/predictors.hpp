#pragma once

#include "srbe/estimators.hpp"

namespace srbe {

// ---------------------------------------------------------------------------
// Prediction on the training design. The target is y0 = X* gamma + delta and
// the predictor is y_hat_(j) = X* gamma_hat_(j), so
//
//   MSEM(y_hat) = X* MSEM(gamma_hat) X*' - X* bias delta' - delta bias' X*'
//                 + delta delta'.
// ---------------------------------------------------------------------------

struct PredictorMoments {
    Matrix msem;  // n x n
    double smse = 0.0;
};

inline Vector predict(const EstimatorSpec& spec, const CanonicalForm& canon,
                      const SampleModel& model, const RestrictionSystem& restriction) {
    return canon.x_star * estimate(spec, canon, model, restriction);
}

inline PredictorMoments predictor_moments(const EstimatorSpec& spec, const CanonicalForm& canon,
                                          const Vector& delta) {
    if (delta.size() != canon.n())
        throw DimensionMismatch("predictor_moments: delta length != n");
    const EstimatorMoments est = moments(spec, canon);
    const Vector lifted_bias = canon.x_star * est.bias;
    PredictorMoments out;
    out.msem = canon.x_star * est.msem * canon.x_star.transpose() -
               lifted_bias * delta.transpose() - delta * lifted_bias.transpose() +
               delta * delta.transpose();
    out.smse = out.msem.trace();
    return out;
}

/// Predictor SMSE without materializing the n x n matrix: since X*'X* = I,
/// tr MSEM(y_hat) = tr MSEM(gamma_hat) - 2 delta'X* bias + delta'delta.
inline double predictor_smse(const EstimatorSpec& spec, const CanonicalForm& canon,
                             const Vector& delta) {
    if (delta.size() != canon.n())
        throw DimensionMismatch("predictor_smse: delta length != n");
    const EstimatorMoments est = moments(spec, canon);
    const Vector projected = canon.x_star.transpose() * delta;
    return est.smse - 2.0 * projected.dot(est.bias) + delta.squaredNorm();
}

inline SmseTable predictor_smse_grid(const std::vector<EstimatorSpec>& kinds,
                                     const std::vector<double>& grid,
                                     const CanonicalForm& canon, const Vector& delta) {
    if (grid.empty()) throw EmptyGrid("predictor_smse_grid: grid must be nonempty");
    for (double v : grid)
        if (!(v > 0.0 && v < 1.0))
            throw ValidationError("predictor_smse_grid: grid values must lie in (0, 1)");
    SmseTable table;
    table.grid = grid;
    table.values.resize(static_cast<Index>(kinds.size()), static_cast<Index>(grid.size()));
    for (std::size_t row = 0; row < kinds.size(); ++row) {
        table.row_names.push_back(to_string(kinds[row].kind));
        for (std::size_t col = 0; col < grid.size(); ++col)
            table.values(static_cast<Index>(row), static_cast<Index>(col)) =
                predictor_smse(at_grid_point(kinds[row], grid[col]), canon, delta);
    }
    return table;
}

}  // namespace srbe
