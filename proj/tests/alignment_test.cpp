#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles/procrustes_oracle.hpp"
#include "oracles/rank_oracle.hpp"
#include "pgeo/alignment.hpp"
#include "pgeo/error.hpp"
#include "support/synthetic.hpp"

using namespace pgeo;
using namespace pgeo::testing;

namespace {

Eigen::Matrix2d rotation(double degrees) {
  const double t = degrees * std::numbers::pi / 180.0;
  Eigen::Matrix2d r;
  r << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  return r;
}

EmbeddingConfig config(const Eigen::MatrixXd& coords) {
  return {make_labels(static_cast<std::size_t>(coords.rows())), coords, std::nullopt, std::nullopt};
}

std::vector<oracle::Point2> points(const Eigen::MatrixXd& m) {
  std::vector<oracle::Point2> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back({m(i, 0), m(i, 1)});
  return out;
}

}  // namespace

TEST(AverageRanks, TiesShareTheMeanPosition) {
  const std::vector<double> v{10, 20, 20, 30, 5};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{2, 3.5, 3.5, 5, 1}));
  const std::vector<double> all{7, 7, 7};
  EXPECT_EQ(average_ranks(all), (std::vector<double>{2, 2, 2}));
}

TEST(Rsa, IdenticalAndReversed) {
  StreamRng rng{1};
  const auto d = as_dissimilarity(random_dissimilarity(8, rng));
  const auto same = rsa(d, d);
  EXPECT_EQ(*same.rho, 1.0);
  EXPECT_EQ(same.n_pairs, 28u);

  Eigen::MatrixXd reversed = (Eigen::MatrixXd::Constant(8, 8, 2.0) - d.values());
  reversed.diagonal().setZero();
  const auto r = rsa(as_dissimilarity(reversed), d);
  EXPECT_EQ(*r.rho, -1.0);
}

TEST(Rsa, MatchesBruteForceOracle) {
  StreamRng rng{2024};
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = as_dissimilarity(random_dissimilarity(8, rng, trial % 4 == 0));
    const auto b = as_dissimilarity(random_dissimilarity(8, rng, trial % 3 == 0));
    const auto expected = oracle::brute_force_spearman(a.upper_triangle(), b.upper_triangle());
    const auto got = rsa(a, b);
    ASSERT_TRUE(expected && got.rho);
    EXPECT_NEAR(*got.rho, *expected, 1e-12);
  }
}

TEST(Rsa, TieSaturatedIsUndefined) {
  Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(5, 5, 0.3);
  flat.diagonal().setZero();
  StreamRng rng{4};
  const auto other = as_dissimilarity(random_dissimilarity(5, rng));
  const auto r = rsa(as_dissimilarity(flat), other);
  EXPECT_FALSE(r.rho.has_value());
  EXPECT_EQ(r.n_pairs, 10u);
}

TEST(Rsa, Preconditions) {
  StreamRng rng{5};
  const auto a = as_dissimilarity(random_dissimilarity(5, rng), "a");
  const auto b = as_dissimilarity(random_dissimilarity(5, rng), "b");
  EXPECT_THROW(rsa(a, b), Error);
  const auto small = as_dissimilarity(random_dissimilarity(3, rng));
  EXPECT_THROW(rsa(small, small), Error);
}

TEST(Rsa, MonotoneTransformInvariance) {
  StreamRng rng{6};
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = as_dissimilarity(random_dissimilarity(9, rng));
    const auto b = as_dissimilarity(random_dissimilarity(9, rng));
    const double base = *rsa(a, b).rho;
    Eigen::MatrixXd cubed = a.values().array().cube();
    Eigen::MatrixXd exped = b.values().array().exp();
    exped.diagonal().setZero();
    EXPECT_NEAR(*rsa(as_dissimilarity(cubed), b).rho, base, 1e-12);
    EXPECT_NEAR(*rsa(a, as_dissimilarity(exped)).rho, base, 1e-12);
  }
}

TEST(Rsa, RelabelingInvariance) {
  StreamRng rng{7};
  const auto a = as_dissimilarity(random_dissimilarity(10, rng));
  const auto b = as_dissimilarity(random_dissimilarity(10, rng));
  std::vector<std::size_t> order{3, 1, 4, 0, 9, 2, 6, 5, 8, 7};
  EXPECT_NEAR(*rsa(a.permuted(order), b.permuted(order)).rho, *rsa(a, b).rho, 1e-12);
}

TEST(Gpa, SimilarityTransformScoresOne) {
  StreamRng rng{8};
  const Eigen::MatrixXd y = gaussian_matrix(7, 2, rng);
  Eigen::MatrixXd moved = 3.0 * y * rotation(37.0);
  moved.rowwise() += Eigen::RowVector2d(5.0, -2.0);
  EXPECT_NEAR(gpa(config(y), config(moved)).score, 1.0, 1e-9);

  Eigen::MatrixXd mirror = y;
  mirror.col(0) *= -1.0;
  EXPECT_NEAR(gpa(config(y), config(mirror)).score, 1.0, 1e-9);
}

TEST(Gpa, MatchesGridSearchOracle) {
  Eigen::MatrixXd a(4, 2), b(4, 2);
  a << 0, 0, 1, 0, 1, 2, -1, 1;
  b << 0.3, -0.2, 0.8, 0.9, -0.5, 1.4, -1.1, -0.3;
  const double expected = oracle::grid_search_score(points(a), points(b));
  EXPECT_NEAR(gpa(config(a), config(b)).score, expected, 1e-5);

  StreamRng rng{9};
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd x = gaussian_matrix(4, 2, rng);
    const Eigen::MatrixXd y = gaussian_matrix(4, 2, rng);
    EXPECT_NEAR(gpa(config(x), config(y)).score, oracle::grid_search_score(points(x), points(y)), 1e-5);
  }
}

TEST(Gpa, ResultInvariants) {
  StreamRng rng{10};
  for (int trial = 0; trial < 30; ++trial) {
    const int p = trial % 2 ? 3 : 2;
    const Eigen::MatrixXd x = gaussian_matrix(8, p, rng);
    const Eigen::MatrixXd y = gaussian_matrix(8, p, rng);
    const auto r = gpa(config(x), config(y));
    EXPECT_LE((r.rotation.transpose() * r.rotation - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(r.score, 1.0 - r.residual / 2.0, 1e-12);
    EXPECT_GE(r.score, 0.0);
    EXPECT_LE(r.score, 1.0);
    EXPECT_GE(r.residual, 0.0);
    EXPECT_LE(r.residual, 2.0);
    // Symmetry.
    EXPECT_NEAR(gpa(config(y), config(x)).score, r.score, 1e-9);
    // The aligned configuration realizes the residual.
    Eigen::MatrixXd yc = y.rowwise() - y.colwise().mean();
    yc /= yc.norm();
    EXPECT_NEAR((r.aligned - yc).squaredNorm(), r.residual, 1e-12);
  }
}

TEST(Gpa, InvariantUnderSimilarityTransformsOfEitherArgument) {
  StreamRng rng{11};
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd x = gaussian_matrix(6, 2, rng);
    const Eigen::MatrixXd y = gaussian_matrix(6, 2, rng);
    const double base = gpa(config(x), config(y)).score;
    Eigen::MatrixXd t = 0.2 * x * rotation(360.0 * rng.uniform());
    t.col(1) *= -1.0;
    t.rowwise() += Eigen::RowVector2d(-7.0, 3.0);
    EXPECT_NEAR(gpa(config(t), config(y)).score, base, 1e-9);
    EXPECT_NEAR(gpa(config(x), config(Eigen::MatrixXd(4.0 * y * rotation(12.0)))).score, base, 1e-9);
  }
}

TEST(Gpa, Preconditions) {
  Eigen::MatrixXd collapsed = Eigen::MatrixXd::Constant(4, 2, 3.0);
  StreamRng rng{12};
  const Eigen::MatrixXd y = gaussian_matrix(4, 2, rng);
  EXPECT_THROW(gpa(config(collapsed), config(y)), Error);
  EXPECT_THROW(gpa(config(y), config(gaussian_matrix(4, 3, rng))), Error);
  EmbeddingConfig other = config(y);
  other.labels[0] = "zzz";
  EXPECT_THROW(gpa(config(y), other), Error);
  EXPECT_THROW(gpa(config(gaussian_matrix(2, 2, rng)), config(gaussian_matrix(2, 2, rng))), Error);
}

TEST(Spearman, AgreesWithOracleOnLongVectorsWithTies) {
  StreamRng rng{13};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x(500), y(500);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = static_cast<double>(rng.below(40));
      y[i] = x[i] * 0.5 + static_cast<double>(rng.below(25));
    }
    EXPECT_NEAR(*spearman(x, y), *oracle::brute_force_spearman(x, y), 1e-12);
  }
}
