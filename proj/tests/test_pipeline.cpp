#include <doctest.h>

#include <cmath>

#include "diffred/metrics.hpp"
#include "diffred/pipeline.hpp"
#include "diffred/preprocess.hpp"
#include "diffred/synth.hpp"

using namespace diffred;

namespace {

// Synthetic data with an exact spectrum; tagged centered so the pipeline
// accepts it (the identities under test hold for any point set).
DataMatrix spiked(Index n, Index D, std::vector<double> profile, std::uint64_t seed) {
    DataMatrix a = synth_spiked(n, D, SpectrumProfile(std::move(profile)),
                                RandomStream(seed, StreamPurpose::SynthData, 0));
    return DataMatrix(std::move(a.values), Preprocessing{false, true});
}

} // namespace

TEST_CASE("full-rank PCA via diffred (k2=0) is isometric") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 2;
    m(1, 1) = 1;
    DataMatrix a(m, Preprocessing{false, true}); // pre-centered variant accepted for test
    DiffRedConfig cfg;
    cfg.k1 = 2;
    cfg.k2 = 0;
    EmbeddingMatrix emb = diffred_embed(a, cfg);
    CHECK(m1(a.values, emb.values) <= 1e-12);
    CHECK(stress_exact(a.values, emb.values) <= 1e-10);
}

TEST_CASE("k2=0 equals pca_embed entry for entry") {
    DataMatrix a = spiked(25, 15, {4, 3, 2, 1, 1}, 31);
    DiffRedConfig cfg;
    cfg.k1 = 3;
    cfg.k2 = 0;
    EmbeddingMatrix dr = diffred_embed(a, cfg);
    EmbeddingMatrix pca = pca_embed(a, 3);
    CHECK(dr.values == pca.values);
}

TEST_CASE("k1=0 equals the best-of-eta random map under the same streams") {
    DataMatrix a = spiked(20, 12, {2, 1, 1, 1}, 32);
    DiffRedConfig cfg;
    cfg.k1 = 0;
    cfg.k2 = 5;
    cfg.eta = 17;
    cfg.seed = 99;
    EmbeddingMatrix dr = diffred_embed(a, cfg);

    RandomStream master(99, StreamPurpose::GaussianMap, 0);
    MonteCarloResult mc = monte_carlo_best(a.values, 5, 17, master);
    CHECK(dr.values == mc.T_min);
}

TEST_CASE("decomposition identity: m1(A, [Z|R]) = (1-p) * m1(A*, R)") {
    std::vector<double> profile{10.0};
    for (int i = 0; i < 30; ++i) {
        profile.push_back(1.0);
    }
    DataMatrix a = spiked(60, 40, profile, 33);
    SpectralSummary s = truncated_svd(a, 12);
    for (Index k1 : {1, 3, 6, 10}) {
        for (Index k2 : {1, 2, 5, 8}) {
            DiffRedConfig cfg;
            cfg.k1 = k1;
            cfg.k2 = k2;
            cfg.eta = 5;
            cfg.seed = 7;
            EmbeddingMatrix emb = diffred_embed(a, s, cfg);
            ResidualPair rp = residual(a, s, k1);
            double p = explained_variance(s, k1);
            double lhs = m1(a.values, emb.values);
            double rhs = (1.0 - p) * m1(rp.A_star, emb.mc.T_min);
            CHECK(std::abs(lhs - rhs) <= 1e-10);
        }
    }
}

TEST_CASE("stress reduction chain: Ls^2 <= (1-p) * Ls(A*, R)^2") {
    DataMatrix a = spiked(50, 30, {8, 2, 1, 1, 1, 1, 1, 1}, 34);
    SpectralSummary s = truncated_svd(a, 6);
    for (Index k1 : {1, 2, 4}) {
        DiffRedConfig cfg;
        cfg.k1 = k1;
        cfg.k2 = 6;
        cfg.eta = 10;
        cfg.seed = 21;
        EmbeddingMatrix emb = diffred_embed(a, s, cfg);
        ResidualPair rp = residual(a, s, k1);
        double p = explained_variance(s, k1);
        double whole = stress_exact(a.values, emb.values);
        double res = stress_exact(rp.A_star, emb.mc.T_min);
        CHECK(whole * whole <= (1.0 - p) * res * res + 1e-10);
    }
}

TEST_CASE("zero residual with k2>0: R zero-filled and flagged") {
    DataMatrix a = spiked(12, 8, {3, 2}, 35); // exact rank 2
    DiffRedConfig cfg;
    cfg.k1 = 2;
    cfg.k2 = 3;
    EmbeddingMatrix emb = diffred_embed(a, cfg);
    CHECK(emb.zero_residual);
    CHECK(emb.values.rightCols(3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("uncentered input rejected") {
    Matrix m = Matrix::Ones(5, 4) + Matrix::Random(5, 4);
    DiffRedConfig cfg;
    cfg.k1 = 1;
    cfg.k2 = 1;
    CHECK_THROWS_AS(diffred_embed(DataMatrix(m), cfg), ConfigError);
}

TEST_CASE("pca examples: exact rank, top-component energy, spectrum (2,1,1)") {
    DataMatrix full = spiked(20, 10, {3, 2, 1}, 36);
    EmbeddingMatrix emb = pca_embed(full, 3); // covers the whole rank
    CHECK(stress_exact(full.values, emb.values) <= 1e-8);

    Matrix diag = Matrix::Zero(3, 3);
    diag(0, 0) = 3;
    diag(1, 1) = 2;
    diag(2, 2) = 1;
    DataMatrix d3(diag, Preprocessing{false, true});
    EmbeddingMatrix one = pca_embed(d3, 1);
    CHECK(one.values.squaredNorm() == doctest::Approx(9.0).epsilon(1e-9));

    DataMatrix spec211 = spiked(15, 10, {2, 1, 1}, 37);
    EmbeddingMatrix two = pca_embed(spec211, 2);
    CHECK(m1(spec211.values, two.values) == doctest::Approx(1.0 / 6.0).epsilon(1e-8));
}

TEST_CASE("rmap: alpha=1 degenerate CI, mean band on equal spikes") {
    DataMatrix a = spiked(50, 30, std::vector<double>(20, 1.0), 38);
    RmapReport single = rmap_embed(a, 5, 1, 3);
    CHECK_FALSE(single.ci_defined);
    CHECK(single.runs.size() == 1);

    DataMatrix big = spiked(200, 100, std::vector<double>(20, 1.0), 39);
    RmapReport r = rmap_embed(big, 20, 20, 4);
    CHECK(r.ci_defined);
    CHECK(r.m1_mean > 0.0);
    CHECK(r.m1_mean < 0.2);
}

TEST_CASE("select_hyperparameters: flat spectrum picks pure rmap") {
    DataMatrix a = spiked(80, 60, std::vector<double>(50, 1.0), 40);
    SpectralSummary s = truncated_svd(a, 10);
    HyperparameterChoice c = select_hyperparameters(s, 10);
    CHECK(c.k1 == 0);
    CHECK(c.k2 == 10);
    CHECK(c.scan.size() == 10);
    // exhaustive scan: every split appears once
    for (Index k1 = 0; k1 < 10; ++k1) {
        CHECK(c.scan[static_cast<std::size_t>(k1)].k1 == k1);
        CHECK(c.scan[static_cast<std::size_t>(k1)].k2 == 10 - k1);
    }
}

TEST_CASE("select_hyperparameters: one dominant spike picks k1=1") {
    // spectrum (10, 1 x 99): p(1) = 100/199, bound(k1=1) < bound(k1=0)
    std::vector<double> profile{10.0};
    for (int i = 0; i < 99; ++i) {
        profile.push_back(1.0);
    }
    DataMatrix a = spiked(150, 120, profile, 41);
    SpectralSummary s = truncated_svd(a, 10);
    HyperparameterChoice c = select_hyperparameters(s, 10);
    CHECK(c.k1 == 1);
    CHECK(c.k2 == 9);
    CHECK(c.scan[0].bound_value == doctest::Approx(std::sqrt(0.1)).epsilon(1e-6));
    CHECK(c.scan[1].bound_value == doctest::Approx(std::sqrt((1.0 - 100.0 / 199.0) / 9.0)).epsilon(1e-4));
}

TEST_CASE("select_hyperparameters: d=1 single cell") {
    DataMatrix a = spiked(10, 8, {2, 1}, 42);
    SpectralSummary s = truncated_svd(a, 2);
    HyperparameterChoice c = select_hyperparameters(s, 1);
    CHECK(c.k1 == 0);
    CHECK(c.k2 == 1);
    CHECK(c.bound_value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("energy match: fixed point, homogeneity, m1 goes to zero") {
    DataMatrix a = spiked(20, 10, {3, 1, 1}, 43);
    DiffRedConfig cfg;
    cfg.k1 = 1;
    cfg.k2 = 3;
    EmbeddingMatrix emb = diffred_embed(a, cfg);

    EmbeddingMatrix matched = energy_match(emb, a);
    CHECK(m1(a.values, matched.values) <= 1e-12);

    EmbeddingMatrix again = energy_match(matched, a);
    CHECK((again.values - matched.values).cwiseAbs().maxCoeff() <= 1e-12);

    EmbeddingMatrix doubled = matched;
    doubled.values *= 2.0;
    EmbeddingMatrix recovered = energy_match(doubled, a);
    CHECK((recovered.values - matched.values).cwiseAbs().maxCoeff() <= 1e-9);

    EmbeddingMatrix zero;
    zero.values = Matrix::Zero(20, 4);
    CHECK_THROWS_AS(energy_match(zero, a), NumericError);
}
