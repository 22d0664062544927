#include "test_support.hpp"

#include <doctest.h>

using namespace srbe;

namespace {

EstimatorSpec random_spec(testing::Rand& rand, Index l) {
    const EstimatorKind kind = all_estimator_kinds[static_cast<std::size_t>(rand.integer(0, 7))];
    return testing::full_spec(kind, rand.uniform(0.05, 1.5), rand.uniform(0.05, 0.95),
                              rand.integer(1, l));
}

double min_eig(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("is_positive_definite / is_nnd basics") {
    CHECK(is_positive_definite(Matrix::Identity(3, 3)));
    CHECK(is_nnd(Matrix::Zero(3, 3)));
    CHECK_FALSE(is_positive_definite(Matrix::Zero(3, 3)));

    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1e-6;
    CHECK_FALSE(is_positive_definite(m));
    CHECK_FALSE(is_nnd(m));

    Matrix skew(2, 2);
    skew << 1.0, 0.4, -0.4, 1.0;
    CHECK_THROWS_AS(is_positive_definite(skew), AsymmetricInput);
}

TEST_CASE("is_nnd: random Gram matrices are NND") {
    testing::Rand rand(10001);
    for (int trial = 0; trial < 100; ++trial) {
        const Index size = rand.integer(1, 6);
        const Matrix g = rand.normal_matrix(size, rand.integer(1, size));
        CHECK(is_nnd(Matrix(g * g.transpose())));
    }
}

TEST_CASE("largest_relative_eigenvalue: scaling and boundary") {
    testing::Rand rand(10002);
    const Matrix m = rand.spd_matrix(4);
    CHECK(largest_relative_eigenvalue(Matrix(0.5 * m), m) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(largest_relative_eigenvalue(m, m) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(largest_relative_eigenvalue(m, Matrix(-m)), NotPositiveDefinite);
}

TEST_CASE("largest_relative_eigenvalue: below one iff M - N is positive definite") {
    testing::Rand rand(10003);
    int checked = 0;
    while (checked < 500) {
        const Index size = rand.integer(2, 5);
        const Matrix m = rand.spd_matrix(size, 0.3);
        Matrix n = rand.nnd_matrix(size, rand.integer(1, size));
        n *= rand.uniform(0.05, 2.0);
        const double lambda_star = largest_relative_eigenvalue(n, m);
        if (std::abs(lambda_star - 1.0) <= 1e-9) continue;  // boundary band
        CHECK((lambda_star < 1.0) == is_positive_definite(Matrix(m - n)));
        ++checked;
    }
}

TEST_CASE("pseudo_inverse: identity and rank-one cases") {
    CHECK(pseudo_inverse(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3), 1e-12));
    CHECK(in_column_space(Matrix::Identity(3, 3), Vector::Ones(3)));

    Vector u(3);
    u << 1.0, 2.0, -1.0;
    const Matrix rank1 = u * u.transpose();
    Vector perp(3);
    perp << 2.0, 0.0, 2.0;  // orthogonal to u
    CHECK_FALSE(in_column_space(rank1, perp));
    CHECK(in_column_space(rank1, Vector(3.0 * u)));

    // Penrose identities on a random rectangular matrix
    testing::Rand rand(10004);
    const Matrix a = rand.normal_matrix(5, 3);
    const Matrix pinv = pseudo_inverse(a);
    CHECK((a * pinv * a - a).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((pinv * a * pinv - pinv).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("rank-one dominance: lambda*B - bb' NND iff membership and quadratic bound") {
    testing::Rand rand(10005);
    int trials = 0;
    while (trials < 500) {
        const Index size = rand.integer(2, 5);
        const Index rank = rand.integer(1, size);
        const Matrix b_mat = rand.nnd_matrix(size, rank);

        // mix in-range and (when singular) out-of-range vectors
        Vector b = b_mat * rand.normal_vector(size);
        if (rank < size && rand.uniform() < 0.4) b += rand.normal_vector(size);
        const double quad = b.dot(pseudo_inverse(b_mat) * b);
        double lambda = quad * rand.uniform(0.3, 2.0) + rand.uniform(0.0, 0.5);
        if (lambda <= 0.0 || std::abs(lambda - quad) <= 1e-6 * std::max(quad, 1.0)) continue;

        const bool lhs = is_nnd(Matrix(lambda * b_mat - b * b.transpose()));
        const bool rhs = in_column_space(b_mat, b) && quad <= lambda;
        CHECK(lhs == rhs);
        ++trials;
    }
}

TEST_CASE("theorem1_compare: self-pair is inconclusive") {
    testing::Rand rand(10006);
    const testing::Instance inst = testing::random_instance(rand, 3, 0, 1, 2);
    const EstimatorSpec spec = testing::full_spec(EstimatorKind::SRRE, 0.4, 0.5, 2);
    const ComparisonVerdict v = theorem1_compare(spec, spec, inst.canon);
    CHECK(v.precondition == PreconditionStatus::Fails);
    CHECK(v.verdict == Verdict::Inconclusive);
}

TEST_CASE("theorem1_compare: MRE vs SRRE dispersion difference is PD for every k > 0") {
    testing::Rand rand(10007);
    const testing::Instance inst = testing::random_instance(rand, 4, 0, 1, 2);
    for (double k : {0.01, 0.1, 0.5, 1.0, 5.0}) {
        const ComparisonVerdict v = theorem1_compare(
            EstimatorSpec::mre(), testing::full_spec(EstimatorKind::SRRE, k, 0.5, 2), inst.canon);
        CHECK(v.precondition == PreconditionStatus::Holds);

        // the difference matches the printed closed form k(2+k)(1+k)^-2 sigma2 tau
        const Matrix expected = k * (2.0 + k) / std::pow(1.0 + k, 2) * inst.canon.sigma2 *
                                inst.canon.tau_matrix();
        const EstimatorMoments mi = moments(EstimatorSpec::mre(), inst.canon);
        const EstimatorMoments mj =
            moments(testing::full_spec(EstimatorKind::SRRE, k, 0.5, 2), inst.canon);
        CHECK((mi.dispersion - mj.dispersion - expected).cwiseAbs().maxCoeff() <
              1e-12 * std::max(expected.cwiseAbs().maxCoeff(), 1.0));
    }
}

TEST_CASE("theorem1_compare: condition <= 1 iff the MSEM difference is NND (random instances)") {
    testing::Rand rand(10008);
    int evaluated = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const Index l = rand.integer(2, 4);
        const testing::Instance inst =
            testing::random_instance(rand, l, 0, rand.integer(0, 2), rand.integer(1, l));
        const ComparisonVerdict v =
            theorem1_compare(random_spec(rand, l), random_spec(rand, l), inst.canon);
        if (v.precondition != PreconditionStatus::Holds) continue;
        if (std::abs(v.condition_value - 1.0) <= 1e-9) continue;
        const bool condition_ok = v.condition_value <= 1.0;
        CHECK(condition_ok == v.crosscheck_nnd());
        if (condition_ok) CHECK(v.verdict == Verdict::JSuperior);
        ++evaluated;
    }
    CHECK(evaluated > 100);
}

TEST_CASE("theorem2_compare: self-pair with nonzero delta sits on the boundary") {
    testing::Rand rand(10009);
    const testing::Instance inst = testing::random_instance(rand, 3, 8, 2, 2);
    REQUIRE(inst.delta.norm() > 0.0);
    const EstimatorSpec spec = testing::full_spec(EstimatorKind::SRLE, 0.5, 0.4, 2);
    const ComparisonVerdict v = theorem2_compare(spec, spec, inst.canon, inst.delta);
    CHECK(v.precondition == PreconditionStatus::Holds);
    CHECK(v.condition_value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(v.verdict == Verdict::JSuperior);
    CHECK(v.boundary);
}

TEST_CASE("theorem2_compare: equal biases and zero delta decide by the msem difference") {
    testing::Rand rand(10010);
    const testing::Instance inst = testing::random_instance(rand, 3, 8, 0, 2);
    const Vector zero = Vector::Zero(inst.canon.n());
    // choose k and d so the ridge and Liu factors coincide: both estimators
    // are numerically identical, the difference is zero, verdict superior
    const double k = 0.25;
    const double d = 2.0 / (1.0 + k) - 1.0;
    const ComparisonVerdict v =
        theorem2_compare(testing::full_spec(EstimatorKind::SRRE, k, 0.5, 2),
                         testing::full_spec(EstimatorKind::SRLE, k, d, 2), inst.canon, zero);
    CHECK(v.precondition == PreconditionStatus::Holds);
    CHECK(v.verdict == Verdict::JSuperior);
    CHECK(std::abs(v.crosscheck_min_eig) < 1e-12);
}

TEST_CASE("theorem2_compare: verdict matches the NND test of the predictor difference") {
    testing::Rand rand(10011);
    int evaluated = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const Index l = rand.integer(2, 4);
        const Index p = rand.integer(0, 2);
        const Index n = rand.integer(l + p + 2, 12);
        testing::Instance inst = testing::random_instance(rand, l, n, p, rand.integer(1, l));

        EstimatorSpec spec_i = random_spec(rand, l);
        EstimatorSpec spec_j = random_spec(rand, l);
        if (trial % 2 == 0) {
            // dominated pair with damped misspecification: the NND
            // precondition then holds often enough to exercise the iff
            inst.restriction.g *= 0.15;
            if (inst.model.beta_omitted) *inst.model.beta_omitted *= 0.15;
            inst.canon = build_canonical(inst.model, inst.restriction);
            inst.delta = inst.model.drift_vector();
            auto [i_kind, j_kind] = corollary_pair(1 + static_cast<int>(rand.integer(0, 27)));
            const double k = rand.uniform(0.02, 0.6);
            const double d = rand.uniform(0.4, 0.98);
            spec_i = testing::full_spec(i_kind, k, d, l);
            spec_j = testing::full_spec(j_kind, k, d, l);
        }
        const ComparisonVerdict v = theorem2_compare(spec_i, spec_j, inst.canon, inst.delta);
        if (v.precondition != PreconditionStatus::Holds) continue;
        if (std::abs(v.condition_value - 1.0) <= 1e-9) continue;
        CHECK((v.verdict == Verdict::JSuperior) == v.crosscheck_nnd());
        ++evaluated;
    }
    CHECK(evaluated > 60);
}

TEST_CASE("corollary_precondition: scalar thresholds and unconditional pairs") {
    testing::Rand rand(10012);
    const testing::Instance inst = testing::random_instance(rand, 4, 0, 1, 2);

    // C9: SRRE dominates SRLE only when k clears (1-d)/(1+d)
    CorollaryParams params{0.2, 0.5, 2};
    PreconditionRecord rec =
        corollary_precondition(EstimatorKind::SRLE, EstimatorKind::SRRE, params, inst.canon);
    CHECK(rec.corollary == 9);
    CHECK(rec.threshold == doctest::Approx(1.0 / 3.0));
    CHECK(rec.status == PreconditionStatus::Fails);
    params.k = 0.4;
    rec = corollary_precondition(EstimatorKind::SRLE, EstimatorKind::SRRE, params, inst.canon);
    CHECK(rec.status == PreconditionStatus::Holds);

    // C1 holds for any valid k
    for (double k : {0.01, 0.3, 2.0}) {
        params.k = k;
        rec = corollary_precondition(EstimatorKind::MRE, EstimatorKind::SRRE, params, inst.canon);
        CHECK(rec.corollary == 1);
        CHECK(rec.status == PreconditionStatus::Holds);
    }

    // reverse direction of a printed pair is NotApplicable
    rec = corollary_precondition(EstimatorKind::SRRE, EstimatorKind::MRE, params, inst.canon);
    CHECK(rec.status == PreconditionStatus::NotApplicable);

    // self-pairs are not covered at all
    CHECK_THROWS_AS(corollary_precondition(EstimatorKind::MRE, EstimatorKind::MRE, params,
                                           inst.canon),
                    UnknownPair);
}

TEST_CASE("corollary_precondition: verdict matches the direct PD test of D(i,j)") {
    testing::Rand rand(10013);
    int checked = 0;
    for (int trial = 0; trial < 600 && checked < 400; ++trial) {
        const Index l = rand.integer(2, 4);
        const testing::Instance inst =
            testing::random_instance(rand, l, 0, rand.integer(0, 2), rand.integer(1, l));
        CorollaryParams params{rand.uniform(0.02, 1.5), rand.uniform(0.02, 0.98),
                               rand.integer(1, l)};
        for (int id = 1; id <= 28; ++id) {
            auto [i_kind, j_kind] = corollary_pair(id);
            const PreconditionRecord rec =
                corollary_precondition(i_kind, j_kind, params, inst.canon);
            if (std::abs(rec.margin) <= 1e-9) continue;  // threshold boundary band

            const EstimatorMoments mi = moments(
                testing::full_spec(i_kind, params.k, params.d, params.h), inst.canon);
            const EstimatorMoments mj = moments(
                testing::full_spec(j_kind, params.k, params.d, params.h), inst.canon);
            const bool direct_pd =
                is_positive_definite(symmetrized(mi.dispersion - mj.dispersion));
            CHECK((rec.status == PreconditionStatus::Holds) == direct_pd);
        }
        ++checked;
    }
    CHECK(checked >= 400);
}

TEST_CASE("closed_form_dispersion_difference: equals the generic difference") {
    testing::Rand rand(10014);
    for (int trial = 0; trial < 60; ++trial) {
        const Index l = rand.integer(2, 4);
        const testing::Instance inst =
            testing::random_instance(rand, l, 0, rand.integer(0, 2), rand.integer(1, l));
        CorollaryParams params{rand.uniform(0.02, 1.5), rand.uniform(0.02, 0.98),
                               rand.integer(1, l)};
        for (int id = 1; id <= 28; ++id) {
            auto [i_kind, j_kind] = corollary_pair(id);
            const Matrix closed = closed_form_dispersion_difference(id, params, inst.canon);
            const EstimatorMoments mi = moments(
                testing::full_spec(i_kind, params.k, params.d, params.h), inst.canon);
            const EstimatorMoments mj = moments(
                testing::full_spec(j_kind, params.k, params.d, params.h), inst.canon);
            const Matrix generic = mi.dispersion - mj.dispersion;
            const double scale = std::max({closed.cwiseAbs().maxCoeff(),
                                           generic.cwiseAbs().maxCoeff(), 1.0});
            CHECK((closed - generic).cwiseAbs().maxCoeff() <= 1e-10 * scale);
        }
    }
}

TEST_CASE("pairwise_matrix: diagonal inconclusive, no two-way strict dominance") {
    testing::Rand rand(10015);
    const testing::Instance small = testing::random_instance(rand, 3, 0, 1, 2);
    const std::vector<EstimatorSpec> two = {EstimatorSpec::mre(),
                                            testing::full_spec(EstimatorKind::SRRE, 0.3, 0.5, 2)};
    const auto grid2 = pairwise_matrix(two, small.canon, small.delta,
                                       ComparisonLevel::Estimator);
    REQUIRE(grid2.size() == 2);
    CHECK(grid2[0][0].verdict == Verdict::Inconclusive);
    CHECK(grid2[1][1].verdict == Verdict::Inconclusive);

    for (int trial = 0; trial < 200; ++trial) {
        const Index l = rand.integer(2, 4);
        const testing::Instance inst =
            testing::random_instance(rand, l, 0, rand.integer(0, 2), rand.integer(1, l));
        const std::vector<EstimatorSpec> specs = {random_spec(rand, l), random_spec(rand, l)};
        const auto grid = pairwise_matrix(specs, inst.canon, inst.delta,
                                          ComparisonLevel::Estimator);
        const bool forward_strict = grid[0][1].verdict == Verdict::JSuperior &&
                                    grid[0][1].crosscheck_min_eig > 1e-8;
        const bool backward_strict = grid[1][0].verdict == Verdict::JSuperior &&
                                     grid[1][0].crosscheck_min_eig > 1e-8;
        CHECK_FALSE((forward_strict && backward_strict));
    }
}

TEST_CASE("pairwise_matrix: full family smoke test with crosscheck consistency") {
    testing::Rand rand(10016);
    const testing::Instance inst = testing::random_instance(rand, 4, 10, 0, 2);
    const std::vector<EstimatorSpec> family = [&] {
        std::vector<EstimatorSpec> specs;
        for (EstimatorKind kind : all_estimator_kinds)
            specs.push_back(testing::full_spec(kind, 0.3, 0.6, 3));
        return specs;
    }();
    for (ComparisonLevel level : {ComparisonLevel::Estimator, ComparisonLevel::Predictor}) {
        const auto grid = pairwise_matrix(family, inst.canon, inst.delta, level);
        REQUIRE(grid.size() == 8);
        for (std::size_t a = 0; a < 8; ++a) {
            REQUIRE(grid[a].size() == 8);
            for (std::size_t b = 0; b < 8; ++b) {
                if (a == b) {
                    CHECK(grid[a][b].verdict == Verdict::Inconclusive);
                    continue;
                }
                if (grid[a][b].verdict == Verdict::JSuperior)
                    CHECK(grid[a][b].crosscheck_nnd());
            }
        }
    }
    CHECK_THROWS_AS(pairwise_matrix({EstimatorSpec::mre()}, inst.canon, inst.delta,
                                    ComparisonLevel::Estimator),
                    ValidationError);
}
