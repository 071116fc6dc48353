#include <doctest.h>

#include <cmath>

#include "diffred/metrics.hpp"
#include "diffred/preprocess.hpp"
#include "diffred/random.hpp"

using namespace diffred;

namespace {

Matrix random_matrix(Index n, Index D, std::uint64_t seed) {
    RandomStream s(seed, StreamPurpose::SynthData, 0);
    Matrix m(n, D);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < D; ++j) {
            m(i, j) = s.next_gaussian();
        }
    }
    return m;
}

// Naive double-loop stress, the independent oracle.
double stress_oracle(const Matrix& a, const Matrix& at) {
    double num = 0.0, den = 0.0;
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < i; ++j) {
            double d = (a.row(i) - a.row(j)).norm();
            double dt = (at.row(i) - at.row(j)).norm();
            num += (d - dt) * (d - dt);
            den += d * d;
        }
    }
    return std::sqrt(num / den);
}

Matrix three_points() {
    Matrix a(3, 2);
    a << 0, 0, 1, 0, 0, 1;
    return a;
}

Matrix three_points_embedded() {
    Matrix at(3, 1);
    at << 0, 1, 0;
    return at;
}

} // namespace

TEST_CASE("m1: identity, homogeneity, hand example") {
    Matrix a = random_matrix(10, 4, 1);
    CHECK(m1(a, a) == 0.0);
    CHECK(m1(a, Matrix(2.0 * a)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(m1(three_points(), three_points_embedded()) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m1_signed(a, Matrix(2.0 * a)) == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK_THROWS_AS(m1(Matrix(Matrix::Zero(3, 3)), a), ConfigError);
    CHECK_THROWS_AS(m1(Matrix(Matrix::Zero(3, 3)), Matrix(Matrix::Zero(3, 3))), NumericError);
}

TEST_CASE("stress: orthonormal map gives zero") {
    Matrix a = random_matrix(12, 5, 2);
    // Householder reflection, a fixed orthonormal 5x5 map
    Vector v = Vector::Ones(5).normalized();
    Matrix q = Matrix::Identity(5, 5) - 2.0 * v * v.transpose();
    CHECK(stress_exact(a, Matrix(a * q)) <= 1e-12);
}

TEST_CASE("stress: hand-enumerated 3 point example") {
    double expected = std::sqrt((1.0 + (std::sqrt(2.0) - 1.0) * (std::sqrt(2.0) - 1.0)) / 4.0);
    CHECK(stress_exact(three_points(), three_points_embedded()) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.5411961).epsilon(1e-6));
}

TEST_CASE("stress: zero embedding gives 1") {
    Matrix a = random_matrix(8, 3, 3);
    CHECK(stress_exact(a, Matrix(Matrix::Zero(8, 2))) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stress matches the naive oracle, serial and threaded") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Matrix a = random_matrix(41, 7, 100 + seed);
        Matrix at = random_matrix(41, 3, 200 + seed);
        double oracle = stress_oracle(a, at);
        CHECK(stress_exact(a, at, 1) == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(stress_exact(a, at, 8) == stress_exact(a, at, 1));
    }
}

TEST_CASE("stress invariance under rigid motion and orthogonal Q on the embedding") {
    Matrix a = random_matrix(15, 6, 4);
    Matrix at = random_matrix(15, 3, 5);
    double base = stress_exact(a, at);

    // rotate + translate the original point set
    Vector v = Vector::Ones(6).normalized();
    Matrix q6 = Matrix::Identity(6, 6) - 2.0 * v * v.transpose();
    Matrix moved = a * q6;
    moved.rowwise() += Eigen::RowVectorXd::Constant(6, 3.25);
    CHECK(stress_exact(moved, at) == doctest::Approx(base).epsilon(1e-10));

    Vector w = Vector::LinSpaced(3, 1.0, 3.0).normalized();
    Matrix q3 = Matrix::Identity(3, 3) - 2.0 * w * w.transpose();
    CHECK(stress_exact(a, Matrix(at * q3)) == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("sampled stress: determinism and exhaustive fallback") {
    Matrix a = random_matrix(30, 5, 6);
    Matrix at = random_matrix(30, 2, 7);
    RandomStream s1(9, StreamPurpose::StressSample, 0);
    RandomStream s2(9, StreamPurpose::StressSample, 0);
    auto r1 = stress_sampled(a, at, 300, s1);
    auto r2 = stress_sampled(a, at, 300, s2);
    CHECK(r1.estimate == r2.estimate);
    CHECK_FALSE(r1.exact);

    RandomStream s3(9, StreamPurpose::StressSample, 1);
    auto full = stress_sampled(a, at, 30 * 29 / 2, s3);
    CHECK(full.exact);
    CHECK(full.estimate == stress_exact(a, at));
}

TEST_CASE("sampled stress: estimate within 3 standard errors most of the time") {
    Matrix a = random_matrix(200, 6, 8);
    Matrix at = random_matrix(200, 3, 9);
    double exact = stress_exact(a, at);
    int hits = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        RandomStream s(50 + static_cast<std::uint64_t>(t), StreamPurpose::StressSample, 0);
        auto r = stress_sampled(a, at, 2000, s);
        if (std::abs(r.estimate - exact) <= 3.0 * r.standard_error) {
            ++hits;
        }
    }
    CHECK(hits >= trials - 3);
}

TEST_CASE("pairwise energy identity on centered data") {
    Matrix two(2, 2);
    two << 0.5, -0.5, -0.5, 0.5;
    auto check = pairwise_energy_identity_check(two);
    CHECK(check.lhs == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(check.rhs == doctest::Approx(2.0).epsilon(1e-12));

    DataMatrix pre = preprocess(DataMatrix(random_matrix(100, 20, 10)));
    CHECK(pairwise_energy_identity_check(pre.values).relative_gap <= 1e-9);
}

TEST_CASE("pairwise energy identity gap on uncentered data equals the mean term") {
    Matrix a = random_matrix(40, 8, 11);
    a.array() += 0.9;
    auto check = pairwise_energy_identity_check(a);
    Eigen::RowVectorXd mu = a.colwise().mean();
    auto n = static_cast<double>(a.rows());
    double expected_gap = n * n * mu.squaredNorm() / check.rhs;
    CHECK(check.relative_gap == doctest::Approx(expected_gap).epsilon(1e-9));
}

TEST_CASE("triangle bound: degenerate cases and random sweep") {
    CHECK(triangle_bound_check(0.0, 2.0, 5.0));
    CHECK(triangle_bound_check(3.0, 4.0, 4.0));
    RandomStream s(12, StreamPurpose::StressSample, 0);
    for (int i = 0; i < 100'000; ++i) {
        double a = 10.0 * s.next_unit();
        double b = 10.0 * s.next_unit();
        double c = 10.0 * s.next_unit();
        CHECK(triangle_bound_check(a, b, c));
    }
}

TEST_CASE("beta sensitivity") {
    std::vector<GridCell> flat{{10, 0, 10, 0.3}, {10, 1, 9, 0.3}, {20, 0, 20, 0.3}, {20, 5, 15, 0.3}};
    CHECK(beta_sensitivity(flat) == 0.0);

    std::vector<GridCell> two{{10, 0, 10, 0.0}, {10, 1, 9, 0.2}};
    CHECK(beta_sensitivity(two) == doctest::Approx(0.01).epsilon(1e-12));

    std::vector<GridCell> thin{{10, 0, 10, 0.1}};
    CHECK_THROWS_AS(beta_sensitivity(thin), ConfigError);
}

TEST_CASE("metric report JSON key order") {
    MetricReport r;
    r.m1 = 0.5;
    r.stress = 0.25;
    r.bound_value = 0.1;
    r.provenance = {{"seed", 7}};
    auto j = r.to_json();
    auto it = j.begin();
    CHECK(it.key() == "m1");
    ++it;
    CHECK(it.key() == "stress");
    ++it;
    CHECK(it.key() == "stress_mode");
    ++it;
    CHECK(it.key() == "bound_value");
    ++it;
    CHECK(it.key() == "wall_time_ms");
    ++it;
    CHECK(it.key() == "provenance");
}
