#pragma once

// Shared helpers for the test suites: seeded random models, restrictions and
// canonical forms. Reuses the library RNG for reproducibility; the oracle
// logic in each test stays independent of the code paths it checks.

#include "srbe/srbe.hpp"

#include <cstdint>

namespace srbe::testing {

class Rand {
public:
    explicit Rand(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * rng_.uniform01();
    }

    double normal() { return inverse_normal_cdf(rng_.uniform01()); }

    Index integer(Index lo, Index hi) {  // inclusive range
        return lo + static_cast<Index>(rng_.uniform01() * static_cast<double>(hi - lo + 1));
    }

    Vector normal_vector(Index size) {
        Vector v(size);
        for (Index i = 0; i < size; ++i) v[i] = normal();
        return v;
    }

    Matrix normal_matrix(Index rows, Index cols) {
        Matrix m(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) m(i, j) = normal();
        return m;
    }

    Matrix spd_matrix(Index size, double ridge = 0.1) {
        const Matrix a = normal_matrix(size, size);
        return Matrix(a * a.transpose() + ridge * Matrix::Identity(size, size));
    }

    /// Symmetric NND matrix of the given rank.
    Matrix nnd_matrix(Index size, Index rank) {
        const Matrix c = normal_matrix(size, rank);
        return Matrix(c * c.transpose());
    }

private:
    Xoshiro256PlusPlus rng_;
};

struct Instance {
    SampleModel model;
    RestrictionSystem restriction;
    CanonicalForm canon;
    Vector delta;
};

/// Random full instance: design, coefficients, omitted part and a rank-q
/// stochastic restriction with a random SPD scale.
inline Instance random_instance(Rand& rand, Index l, Index n = 0, Index p = 0, Index q = 0) {
    if (n == 0) n = l + p + 6;
    if (q == 0) q = rand.integer(1, l);

    Instance inst;
    inst.model.x_included = rand.normal_matrix(n, l);
    inst.model.x_omitted = rand.normal_matrix(n, p);
    inst.model.beta_included = rand.normal_vector(l);
    inst.model.beta_omitted = rand.normal_vector(p);
    inst.model.sigma2 = rand.uniform(0.5, 2.0);

    inst.restriction.R = rand.normal_matrix(q, l);
    inst.restriction.g = rand.normal_vector(q);
    inst.restriction.W = rand.spd_matrix(q, 0.5);
    inst.restriction.r = inst.restriction.R * (*inst.model.beta_included) + inst.restriction.g +
                         0.1 * rand.normal_vector(q);

    inst.delta = inst.model.drift_vector();
    inst.model.y = inst.model.x_included * (*inst.model.beta_included) + inst.delta +
                   rand.normal_vector(n) * std::sqrt(inst.model.sigma2);
    inst.canon = build_canonical(inst.model, inst.restriction);
    return inst;
}

/// Spec with every parameter populated so any kind can be evaluated.
inline EstimatorSpec full_spec(EstimatorKind kind, double k, double d, Index h) {
    return EstimatorSpec::make(kind, k, d, h);
}

}  // namespace srbe::testing
