#include "test_support.hpp"

#include <doctest.h>

#include <cstring>

using namespace srbe;

namespace {

SimConfig small_config(double rho, Index l, Index p, Index reps, std::uint64_t seed) {
    SimConfig config;
    config.n = 50;
    config.m = 5;
    config.l = l;
    config.p = p;
    config.rho = rho;
    config.reps = reps;
    config.seed = seed;
    config.restriction = default_sim_restriction(5);
    return config;
}

}  // namespace

TEST_CASE("generate_design: rho = 0 yields essentially uncorrelated columns") {
    NormalStream stream(11001, 0);
    const Matrix x = generate_design(5000, 4, 0.0, stream);
    Matrix centered = x.rowwise() - x.colwise().mean();
    Vector norms = centered.colwise().norm();
    for (Index a = 0; a < 4; ++a)
        for (Index b = a + 1; b < 4; ++b)
            CHECK(std::abs(centered.col(a).dot(centered.col(b)) / (norms[a] * norms[b])) < 0.1);
}

TEST_CASE("generate_design: consumes a fixed number of draws") {
    NormalStream a(11002, 3);
    NormalStream b(11002, 3);
    const Matrix x = generate_design(20, 5, 0.9, a);
    for (int skip = 0; skip < 20 * 5; ++skip) b.next();
    // next draw from both streams agrees: the design consumed exactly n*m
    CHECK(a.next() == b.next());
    CHECK(x.rows() == 20);
}

TEST_CASE("generate_response: unit-norm coefficient with deterministic tie-break") {
    testing::Rand rand(11003);
    NormalStream stream(11004, 0);
    const Matrix x = generate_design(50, 5, 0.9, stream);
    NormalStream s1(11005, 0), s2(11005, 0);
    auto [y1, beta1] = generate_response(x, s1);
    auto [y2, beta2] = generate_response(x, s2);
    CHECK(std::abs(beta1.norm() - 1.0) < 1e-12);
    CHECK(std::memcmp(beta1.data(), beta2.data(), sizeof(double) * 5) == 0);
    CHECK(std::memcmp(y1.data(), y2.data(), sizeof(double) * 50) == 0);

    // orthonormal-column design: degenerate spectrum, still deterministic
    Eigen::HouseholderQR<Matrix> qr(rand.normal_matrix(30, 4));
    const Matrix q = qr.householderQ() * Matrix::Identity(30, 4);
    NormalStream s3(11006, 0), s4(11006, 0);
    auto [y3, beta3] = generate_response(q, s3);
    auto [y4, beta4] = generate_response(q, s4);
    CHECK(std::memcmp(beta3.data(), beta4.data(), sizeof(double) * 4) == 0);
    CHECK(std::abs(beta3.norm() - 1.0) < 1e-12);
    // sign convention: first component of magnitude above 1e-12 is nonnegative
    for (Index i = 0; i < 4; ++i) {
        if (std::abs(beta3[i]) > 1e-12) {
            CHECK(beta3[i] > 0.0);
            break;
        }
    }
}

TEST_CASE("generate_response: residual variance is close to one") {
    double acc = 0.0;
    Index count = 0;
    for (int rep = 0; rep < 2000; ++rep) {
        NormalStream stream(11007, static_cast<std::uint64_t>(rep));
        const Matrix x = generate_design(50, 5, 0.9, stream);
        auto [y, beta] = generate_response(x, stream);
        acc += (y - x * beta).squaredNorm();
        count += 50;
    }
    CHECK(acc / static_cast<double>(count) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("run_monte_carlo: MRE and SRPCR rows constant, deterministic, finite") {
    const SimConfig config = small_config(0.9, 3, 2, 40, 2024);
    const SimResult a = run_monte_carlo(config);
    const SimResult b = run_monte_carlo(config);

    CHECK(std::memcmp(a.estimator_smse.values.data(), b.estimator_smse.values.data(),
                      sizeof(double) * a.estimator_smse.values.size()) == 0);
    CHECK(std::memcmp(a.predictor_smse.values.data(), b.predictor_smse.values.data(),
                      sizeof(double) * a.predictor_smse.values.size()) == 0);

    for (Index c = 1; c < 9; ++c) {
        CHECK(a.estimator_smse.values(0, c) == a.estimator_smse.values(0, 0));  // MRE
        CHECK(a.estimator_smse.values(5, c) == a.estimator_smse.values(5, 0));  // SRPCR
        CHECK(a.predictor_smse.values(0, c) == a.predictor_smse.values(0, 0));
        CHECK(a.predictor_smse.values(5, c) == a.predictor_smse.values(5, 0));
    }
    CHECK(a.estimator_smse.values.allFinite());
    CHECK(a.predictor_smse.values.allFinite());
    CHECK(a.estimator_smse.values.minCoeff() >= 0.0);
    CHECK(a.resampled == 0);
}

TEST_CASE("run_monte_carlo: reps = 1 twice is bit-identical") {
    const SimConfig config = small_config(0.99, 5, 0, 1, 7);
    const SimResult a = run_monte_carlo(config);
    const SimResult b = run_monte_carlo(config);
    CHECK(std::memcmp(a.estimator_smse.values.data(), b.estimator_smse.values.data(),
                      sizeof(double) * a.estimator_smse.values.size()) == 0);
    CHECK(a.mean_condition_number == b.mean_condition_number);
}

TEST_CASE("run_monte_carlo: per-replicate msem matrices are NND") {
    const SimConfig config = small_config(0.9, 4, 1, 1, 99);
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        NormalStream stream(config.seed, rep);
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
        for (const EstimatorSpec& tmpl : default_family(config.h()))
            for (double v : config.grid) {
                const EstimatorMoments m = moments(at_grid_point(tmpl, v), canon);
                Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m.msem),
                                                         Eigen::EigenvaluesOnly);
                CHECK(es.eigenvalues().minCoeff() >= -1e-8 * std::max(m.msem.trace(), 1.0));
            }
    }
}

TEST_CASE("run_monte_carlo: doubling reps moves cells by less than 3 standard errors") {
    const SimResult base = run_monte_carlo(small_config(0.9, 4, 1, 400, 31));
    const SimResult doubled = run_monte_carlo(small_config(0.9, 4, 1, 800, 31));
    for (Index r = 0; r < base.estimator_smse.values.rows(); ++r)
        for (Index c = 0; c < base.estimator_smse.values.cols(); ++c) {
            const double gap =
                std::abs(base.estimator_smse.values(r, c) - doubled.estimator_smse.values(r, c));
            CHECK(gap < 3.0 * std::max(base.estimator_se(r, c), 1e-12));
        }
}

TEST_CASE("run_monte_carlo: validation") {
    SimConfig config = small_config(0.9, 3, 2, 10, 1);
    config.rho = 1.0;
    CHECK_THROWS_AS(run_monte_carlo(config), ValidationError);
    config.rho = 0.9;
    config.l = 4;  // l + p != m
    CHECK_THROWS_AS(run_monte_carlo(config), ValidationError);
    config.l = 3;
    config.grid = {0.5, 1.5};
    CHECK_THROWS_AS(run_monte_carlo(config), ValidationError);
}

TEST_CASE("design calibration: quick check against the reported means") {
    // reduced-replicate version of the calibration; the acceptance suite runs
    // the full 2000-replicate protocol at +-10%
    const Index reps = 300;
    double cond_acc = 0.0;
    Vector vif_acc = Vector::Zero(5);
    for (Index rep = 0; rep < reps; ++rep) {
        NormalStream stream(20230815, static_cast<std::uint64_t>(rep));
        const Matrix x = generate_design(50, 5, 0.9, stream);
        const DesignDiagnostics diag = design_diagnostics(x);
        cond_acc += diag.condition_number;
        vif_acc += diag.vif;
    }
    CHECK(cond_acc / reps == doctest::Approx(9.49).epsilon(0.15));
    CHECK(vif_acc[4] / reps == doctest::Approx(20.47).epsilon(0.15));
}
