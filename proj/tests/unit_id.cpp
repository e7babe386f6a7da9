#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "repeval/core.hpp"
#include "repeval/id_estimation.hpp"
#include "repeval/rng.hpp"
#include "repeval/synth.hpp"
#include "repeval/types.hpp"

using repeval::EmbeddingSet;
using repeval::Error;
using repeval::ErrorCode;
using repeval::Matrix;
using repeval::Metric;
using repeval::NeighborTable;

namespace {

NeighborTable table_from_distances(const std::vector<std::vector<double>>& rows) {
  NeighborTable t;
  t.distances = Matrix(rows.size(), rows[0].size());
  t.indices = repeval::IMatrix(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[0].size(); ++j) {
      t.distances(i, j) = rows[i][j];
      t.indices(i, j) = static_cast<Eigen::Index>((i + j + 1) % rows.size());
    }
  return t;
}

} // namespace

TEST_CASE("pareto-distributed ratios recover their parameter") {
  repeval::Rng rng(555);
  std::vector<double> mu(10000);
  for (double& v : mu) v = std::pow(1.0 - rng.next_double(), -1.0 / 7.0);
  auto fit = repeval::twonn_fit_from_ratios(mu, 0.1);
  CHECK(fit.id == doctest::Approx(7.0).epsilon(0.3 / 7.0));
  CHECK(fit.n_used == 9000);
}

TEST_CASE("ratio fit matches the closed-form regression slope") {
  auto fit = repeval::twonn_fit_from_ratios({2.0, 4.0, 8.0, 16.0}, 0.0);
  CHECK(fit.id == doctest::Approx(0.6010741070913459).epsilon(1e-6));
}

TEST_CASE("two equal ratios leave a single usable fit point") {
  auto fit = repeval::twonn_fit_from_ratios({2.0, 2.0}, 0.0);
  CHECK(fit.id == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("duplicating every ratio moves the fit only by discretization") {
  auto base = repeval::twonn_fit_from_ratios({2.0, 4.0, 8.0, 16.0}, 0.0);
  auto dup =
      repeval::twonn_fit_from_ratios({2.0, 2.0, 4.0, 4.0, 8.0, 8.0, 16.0, 16.0}, 0.0);
  CHECK(dup.id == doctest::Approx(0.595657701938251).epsilon(1e-6));
  CHECK(std::abs(dup.id - base.id) <= 0.02);
}

TEST_CASE("ratio fit rejects degenerate input") {
  CHECK_THROWS_AS(repeval::twonn_fit_from_ratios({2.0}, 0.5), Error);
  try {
    repeval::twonn_fit_from_ratios({1.0, 1.0, 1.0}, 0.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateRatios);
  }
}

TEST_CASE("planar manifold embedded in high dimension is recovered") {
  repeval::SynthSpec spec;
  spec.kind = repeval::SynthKind::HypercubeManifold;
  spec.n = 5000;
  spec.intrinsic_dim = 2;
  spec.ambient_dim = 64;
  spec.seed = 100;
  auto e = repeval::gen_hypercube_manifold(spec);
  auto fit = repeval::twonn_id(e, Metric::Euclidean, 0.1);
  CHECK(fit.id >= 1.7);
  CHECK(fit.id <= 2.3);
}

TEST_CASE("segment in high dimension has dimension one") {
  repeval::SynthSpec spec;
  spec.kind = repeval::SynthKind::HypercubeManifold;
  spec.n = 5000;
  spec.intrinsic_dim = 1;
  spec.ambient_dim = 16;
  spec.seed = 101;
  auto e = repeval::gen_hypercube_manifold(spec);
  auto fit = repeval::twonn_id(e, Metric::Euclidean, 0.1);
  CHECK(fit.id >= 0.9);
  CHECK(fit.id <= 1.1);
}

TEST_CASE("duplicate rows are dropped and counted") {
  Matrix m(6, 2);
  m << 0.0, 0.0, 0.0, 0.0, 1.0, 0.2, 2.0, 1.4, 3.1, 0.8, 4.0, 2.2;
  auto fit = repeval::twonn_id(EmbeddingSet{m}, Metric::Euclidean, 0.0);
  CHECK(fit.n_duplicates_dropped == 2);

  Matrix tiny(4, 2);
  tiny << 1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0;
  CHECK_THROWS_AS(repeval::twonn_id(EmbeddingSet{tiny}, Metric::Euclidean, 0.0), Error);
}

TEST_CASE("the estimate is bit-invariant under power-of-two scaling") {
  EmbeddingSet e{oracle::random_matrix(7, 400, 8)};
  auto base = repeval::twonn_id(e, Metric::Euclidean, 0.1);
  EmbeddingSet scaled{e.data * 4.0};
  auto s = repeval::twonn_id(scaled, Metric::Euclidean, 0.1);
  REQUIRE(s.mu.size() == base.mu.size());
  for (size_t i = 0; i < s.mu.size(); ++i) CHECK(s.mu[i] == base.mu[i]);
  CHECK(s.id == base.id);
}

TEST_CASE("local likelihood estimates match their closed forms") {
  auto t1 = table_from_distances({{1.0, std::exp(1.0)}});
  auto r1 = repeval::mle_local_id(t1, 2);
  CHECK(r1.local_id[0] == doctest::Approx(1.0).epsilon(1e-12));

  auto t2 = table_from_distances({{1.0, 1.0, std::exp(0.5)}});
  auto r2 = repeval::mle_local_id(t2, 3);
  CHECK(r2.local_id[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("pooling variants aggregate local estimates as stated") {
  auto t = table_from_distances({{1.0, std::exp(1.0)}, {1.0, std::exp(0.5)}});
  auto arith = repeval::mle_local_id(t, 2, repeval::IdPooling::Arithmetic);
  CHECK(arith.local_id[0] == doctest::Approx(1.0));
  CHECK(arith.local_id[1] == doctest::Approx(2.0));
  CHECK(arith.global_id == doctest::Approx(1.5).epsilon(1e-12));
  auto harm = repeval::mle_local_id(t, 2, repeval::IdPooling::Harmonic);
  CHECK(harm.global_id == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("zero-distance neighbors exclude a point; all excluded is an error") {
  auto t = table_from_distances({{0.0, 1.0}, {1.0, 2.0}});
  auto r = repeval::mle_local_id(t, 2);
  CHECK(r.n_excluded == 1);
  CHECK(r.local_id.size() == 2);

  auto all_zero = table_from_distances({{0.0, 1.0}, {0.0, 2.0}});
  try {
    repeval::mle_local_id(all_zero, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroDistance);
  }
}

TEST_CASE("k must fit inside the neighbor table") {
  auto t = table_from_distances({{1.0, 2.0}, {1.0, 2.0}});
  CHECK_THROWS_AS(repeval::mle_local_id(t, 3), Error);
  CHECK_THROWS_AS(repeval::mle_local_id(t, 1), Error);
}

TEST_CASE("local estimates depend only on distance ratios") {
  EmbeddingSet e{oracle::random_matrix(17, 300, 6)};
  auto t = repeval::knn_query(e, 10, Metric::Euclidean);
  auto base = repeval::mle_local_id(t, 10);
  NeighborTable scaled = t;
  scaled.distances *= 3.7;
  auto s = repeval::mle_local_id(scaled, 10);
  for (size_t i = 0; i < base.local_id.size(); ++i)
    CHECK(s.local_id[i] == doctest::Approx(base.local_id[i]).epsilon(1e-9));
}

TEST_CASE("five-dimensional cube recovered by the likelihood estimator") {
  repeval::SynthSpec spec;
  spec.kind = repeval::SynthKind::HypercubeManifold;
  spec.n = 5000;
  spec.intrinsic_dim = 5;
  spec.ambient_dim = 64;
  spec.seed = 102;
  auto e = repeval::gen_hypercube_manifold(spec);
  auto t = repeval::knn_query(e, 20, Metric::Euclidean);
  auto r = repeval::mle_local_id(t, 20);
  CHECK(r.global_id >= 4.2);
  CHECK(r.global_id <= 5.8);
}

TEST_CASE("unit-square entropy is near zero") {
  repeval::Rng rng(808);
  Matrix m(10000, 2);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = rng.next_double();
  auto r = repeval::knn_entropy(EmbeddingSet{m}, 10, Metric::Euclidean);
  CHECK(std::abs(r.entropy) <= 0.15);
}

TEST_CASE("interval of length three has entropy log 3") {
  repeval::Rng rng(809);
  Matrix m(10000, 1);
  for (int i = 0; i < m.rows(); ++i) m(i, 0) = 3.0 * rng.next_double();
  auto r = repeval::knn_entropy(EmbeddingSet{m}, 10, Metric::Euclidean);
  CHECK(std::abs(r.entropy - std::log(3.0)) <= 0.15);
}

TEST_CASE("scaling shifts entropy by the exact dimensional law") {
  repeval::Rng rng(810);
  Matrix m(2000, 2);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = rng.next_double();
  auto base = repeval::knn_entropy(EmbeddingSet{m}, 10, Metric::Euclidean);
  auto scaled = repeval::knn_entropy(EmbeddingSet{Matrix(m * 2.0)}, 10, Metric::Euclidean);
  CHECK(scaled.entropy - base.entropy ==
        doctest::Approx(base.global_id * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("entropy requires nonzero neighbor distances") {
  Matrix m(4, 2);
  m << 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(repeval::knn_entropy(EmbeddingSet{m}, 2, Metric::Euclidean), Error);
}
