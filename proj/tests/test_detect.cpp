// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "gfad/detect.hpp"
#include "gfad/model.hpp"
#include "oracles.hpp"

using namespace gfad;

namespace {

// Max KKT violation of min 0.5||Ar - x||^2 + lambda sum r over r >= 0.
double kkt_violation(const CMatrix& a, const CVector& x, const RVector& r, double lambda) {
  const RVector g = (a.adjoint() * (a * r.cast<cplx>() - x)).real();
  double worst = 0.0;
  for (Index k = 0; k < r.size(); ++k) {
    const double v = g(k) + lambda;
    worst = std::max(worst, r(k) > 0.0 ? std::abs(v) : std::max(0.0, -v));
  }
  return worst;
}

LassoOptions with_lambda(double lambda) {
  LassoOptions o;
  o.lambda = lambda;
  return o;
}

}  // namespace

TEST(SampleCovariance, ZeroInputGivesZero) {
  EXPECT_EQ(sample_covariance(CMatrix::Zero(4, 3)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(sample_covariance(CMatrix(0, 3)), InvalidParameter);
}

TEST(SampleCovariance, SingleAntennaIsRankOneOuterProduct) {
  Rng rng(1);
  const CMatrix y = rng.complex_normal_matrix(1, 4);
  const CMatrix phi = sample_covariance(y);
  // y_m^H y_m for the 1 x L row y_m
  EXPECT_LT((phi - y.adjoint() * y).cwiseAbs().maxCoeff(), 1e-15);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(phi);
  EXPECT_NEAR(eig.eigenvalues()(2), 0.0, 1e-12);
}

TEST(SampleCovariance, HandComputedAverageOfOuterProducts) {
  CMatrix y(3, 2);
  y << cplx(1, 0), cplx(0, 1),  //
      cplx(2, -1), cplx(1, 0),  //
      cplx(0, 0), cplx(-1, 1);
  // (1/3) sum_m conj(y_m)^T y_m, entry (i, j) = (1/3) sum_m conj(y_mi) y_mj
  CMatrix expected(2, 2);
  expected(0, 0) = (1.0 + 5.0 + 0.0) / 3.0;
  expected(0, 1) = (cplx(1, 0) * cplx(0, 1) + cplx(2, 1) * cplx(1, 0) + 0.0) / 3.0;
  expected(1, 0) = std::conj(expected(0, 1));
  expected(1, 1) = (1.0 + 1.0 + 2.0) / 3.0;
  EXPECT_LT((sample_covariance(y) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SampleCovariance, HermitianPositiveSemidefinite) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const CMatrix phi = sample_covariance(rng.complex_normal_matrix(3 + t, 8));
    EXPECT_LT((phi - phi.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(phi);
    EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-8);
  }
}

TEST(BuildSmv, NoiselessVectorizationIdentity) {
  Rng rng(3);
  const PilotDictionary s = gen_gaussian_dictionary(4, 6, rng);
  RVector r(6);
  r << 0.5, 0.0, 2.0, 1.0, 0.0, 0.3;
  const CMatrix phi = s.entries() * r.cast<cplx>().asDiagonal() * s.entries().adjoint();
  const SmvProblem p = build_smv(phi, s, 0.0);
  EXPECT_LT((p.a * r.cast<cplx>() - p.x).norm(), 1e-10);
}

TEST(BuildSmv, PureNoiseMeanIsRemoved) {
  Rng rng(4);
  const PilotDictionary s = gen_gaussian_dictionary(5, 7, rng);
  const SmvProblem p = build_smv(0.7 * CMatrix::Identity(5, 5), s, 0.7);
  EXPECT_LT(p.x.norm(), 1e-15);
}

TEST(BuildSmv, LiftedColumnsHaveUnitNorm) {
  Rng rng(5);
  const PilotDictionary s = gen_gaussian_dictionary(6, 9, rng);
  const SmvProblem p = build_smv(CMatrix::Identity(6, 6), s, 0.0);
  for (Index k = 0; k < 9; ++k) EXPECT_NEAR(p.a.col(k).norm(), 1.0, 1e-12);
  EXPECT_THROW(build_smv(CMatrix::Identity(5, 5), s, 0.0), InvalidParameter);
  EXPECT_THROW(build_smv(CMatrix::Identity(6, 6), s, -1.0), InvalidParameter);
}

TEST(CovarianceSketch, MatchesBuildSmvVector) {
  Rng rng(6);
  const PilotDictionary s = gen_gaussian_dictionary(4, 5, rng);
  const CMatrix y = rng.complex_normal_matrix(30, 4);
  const CovarianceSketch sk = covariance_sketch(y, 0.2);
  EXPECT_EQ(sk.antennas_used, 30);
  EXPECT_LT((sk.x - build_smv(sk.phi_yy, s, 0.2).x).norm(), 1e-15);
}

TEST(VectorizationIdentity, RandomSmallDictionaries) {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const Index len = 1 + t % 6;
    const Index nodes = 1 + (t * 7) % 10;
    const PilotDictionary s = gen_gaussian_dictionary(len, nodes, rng);
    RVector r(nodes);
    for (Index k = 0; k < nodes; ++k) r(k) = rng.uniform(0.0, 3.0);
    const CMatrix phi = s.entries() * r.cast<cplx>().asDiagonal() * s.entries().adjoint();
    const CVector vec = Eigen::Map<const CVector>(phi.data(), len * len);
    EXPECT_LT((khatri_rao(s.entries()) * r.cast<cplx>() - vec).norm(), 1e-10);
  }
}

TEST(NnLasso, LargeLambdaGivesZero) {
  Rng rng(8);
  const CMatrix a = khatri_rao(gen_gaussian_dictionary(4, 8, rng).entries());
  const CVector x = a * RVector::Constant(8, 0.5).cast<cplx>();
  const double lam = (a.adjoint() * x).real().maxCoeff();
  const DetectionResult res = nn_lasso(a, x, with_lambda(lam * 1.0001));
  EXPECT_EQ(res.r_hat.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(res.support_hat.empty());
}

TEST(NnLasso, IdentityDictionaryIsNonnegativeSoftThreshold) {
  RVector xr(6);
  xr << 0.05, 0.1, 0.35, 1.2, 0.0, 2.0;
  const CMatrix a = CMatrix::Identity(6, 6);
  const DetectionResult res = nn_lasso(a, xr.cast<cplx>(), with_lambda(0.1));
  for (Index k = 0; k < 6; ++k) EXPECT_NEAR(res.r_hat(k), std::max(xr(k) - 0.1, 0.0), 1e-8);
}

TEST(NnLasso, NegativeTargetsClampToZero) {
  RVector xr(3);
  xr << -1.0, 0.5, -0.2;
  const DetectionResult res = nn_lasso(CMatrix::Identity(3, 3), xr.cast<cplx>(), with_lambda(0.0));
  EXPECT_NEAR(res.r_hat(0), 0.0, 1e-12);
  EXPECT_NEAR(res.r_hat(1), 0.5, 1e-8);
  EXPECT_NEAR(res.r_hat(2), 0.0, 1e-12);
}

TEST(NnLasso, NoiselessRecoveryWithinCoherenceCondition) {
  // search a seed whose dictionary admits D = 3 under the coherence rule
  for (std::uint64_t seed = 0;; ++seed) {
    Rng rng = Rng::stream(seed, 1);
    const PilotDictionary s = gen_gaussian_dictionary(16, 12, rng);
    if (max_identifiable_support(khatri_rao_coherence(s.coherence())) < 3) continue;
    const Support truth(12, {2, 5, 9});
    RVector r = RVector::Zero(12);
    r(2) = 1.0;
    r(5) = 0.6;
    r(9) = 1.4;
    const CMatrix a = khatri_rao(s.entries());
    LassoOptions o = with_lambda(1e-6);
    o.max_iterations = 20000;
    const DetectionResult res = nn_lasso(a, a * r.cast<cplx>(), o);
    EXPECT_EQ(res.support_hat, truth) << to_string(res.support_hat);
    break;
  }
}

TEST(NnLasso, KktHoldsOnRandomInstances) {
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    const PilotDictionary s = gen_gaussian_dictionary(6, 10, rng);
    const CMatrix a = khatri_rao(s.entries());
    const CMatrix y = rng.complex_normal_matrix(40, 6);
    const CVector x = build_smv(sample_covariance(y), s, 0.5).x;
    const double lam = rng.uniform(0.01, 0.3);
    const DetectionResult res = nn_lasso(a, x, with_lambda(lam));
    EXPECT_TRUE(res.converged);
    EXPECT_LT(kkt_violation(a, x, res.r_hat, lam), 1e-4) << "instance " << t;
    EXPECT_GE(res.r_hat.minCoeff(), 0.0);
  }
}

TEST(NnLasso, ObjectiveMonotoneNonIncreasing) {
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    const PilotDictionary s = gen_gaussian_dictionary(8, 20, rng);
    const CMatrix a = khatri_rao(s.entries());
    const CVector x = build_smv(sample_covariance(rng.complex_normal_matrix(16, 8)), s, 0.3).x;
    LassoOptions o = with_lambda(0.05);
    o.record_objective = true;
    const DetectionResult res = nn_lasso(a, x, o);
    ASSERT_GE(res.objective_trace.size(), 2u);
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
      EXPECT_LE(res.objective_trace[i], res.objective_trace[i - 1]) << "iteration " << i;
    EXPECT_NEAR(res.objective_trace.back(), res.final_objective, 1e-9 * std::max(1.0, res.final_objective));
  }
}

TEST(NnLasso, InputValidation) {
  const CMatrix a = CMatrix::Identity(3, 3);
  const CVector x = CVector::Ones(3);
  EXPECT_THROW(nn_lasso(a, x, LassoOptions{}), InvalidParameter);
  EXPECT_THROW(nn_lasso(a, CVector::Ones(2), with_lambda(0.1)), InvalidParameter);
  CVector bad = x;
  bad(1) = cplx(std::nan(""), 0.0);
  EXPECT_THROW(nn_lasso(a, bad, with_lambda(0.1)), InvalidParameter);
  EXPECT_THROW(nn_lasso(a, x, with_lambda(-0.1)), InvalidParameter);
  LassoOptions tau = with_lambda(0.1);
  tau.threshold_ratio = 1.0;
  EXPECT_THROW(nn_lasso(a, x, tau), InvalidParameter);
}

TEST(NnLasso, IterationCapFlagsNonConvergence) {
  Rng rng(11);
  const PilotDictionary s = gen_gaussian_dictionary(6, 12, rng);
  const CMatrix a = khatri_rao(s.entries());
  const CVector x = build_smv(sample_covariance(rng.complex_normal_matrix(20, 6)), s, 0.1).x;
  LassoOptions o = with_lambda(1e-4);
  o.max_iterations = 2;
  const DetectionResult res = nn_lasso(a, x, o);
  EXPECT_EQ(res.iterations, 2);
  EXPECT_FALSE(res.converged);
}

TEST(ExtractSupport, ThresholdAndTopD) {
  LassoOptions o;
  EXPECT_TRUE(extract_support(RVector::Zero(4), o).empty());
  RVector r(4);
  r << 5.0, 0.01, 4.0, 0.0;
  EXPECT_EQ(extract_support(r, o).indices(), (std::vector<int>{0, 2}));
  o.known_sparsity = 1;
  RVector r3(3);
  r3 << 1.0, 3.0, 2.0;
  EXPECT_EQ(extract_support(r3, o).indices(), (std::vector<int>{1}));
}

TEST(ExtractSupport, TopDTiesGoToLowerIndex) {
  LassoOptions o;
  o.known_sparsity = 2;
  RVector r(4);
  r << 1.0, 2.0, 1.0, 1.0;
  EXPECT_EQ(extract_support(r, o).indices(), (std::vector<int>{0, 1}));
}

TEST(ExtractSupport, SupportInsidePositiveEntries) {
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    RVector r(20);
    for (Index k = 0; k < 20; ++k) r(k) = rng.bernoulli(0.3) ? rng.uniform(0.0, 1.0) : 0.0;
    LassoOptions o;
    o.known_sparsity = rng.uniform_int(0, 20);
    for (int k : extract_support(r, o)) EXPECT_GT(r(k), 0.0);
    o.known_sparsity.reset();
    for (int k : extract_support(r, o)) EXPECT_GT(r(k), 0.0);
  }
}

namespace {

struct Scenario {
  int nodes, length, antennas, active;
  double snr_db;
};

double detection_rate(const Scenario& sc, int trials, const LassoOptions& opts) {
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(2024, static_cast<std::uint64_t>(t));
    const Support truth = draw_support(sc.nodes, FixedActivity{sc.active}, rng);
    const PilotDictionary s = gen_gaussian_dictionary(sc.length, sc.nodes, rng);
    const ChannelMatrix h = draw_channel_gaussian(sc.antennas, truth, rng);
    const NoiseSpec noise = NoiseSpec::from_snr_db(sc.snr_db);
    const CMatrix y = received_pilot(h.entries, s, noise, rng);
    hits += detect_activity(y, s, noise.variance, opts).support_hat == truth ? 1 : 0;
  }
  return static_cast<double>(hits) / trials;
}

}  // namespace

TEST(DetectActivity, NearPerfectAtSmallSparsity) {
  LassoOptions o;
  o.known_sparsity = 4;
  EXPECT_GE(detection_rate({64, 20, 128, 4, 0.0}, 100, o), 0.95);
}

TEST(DetectActivity, NoiselessLargeArrayIsExact) {
  LassoOptions o;
  o.lambda = 1e-4;
  EXPECT_EQ(detection_rate({64, 20, 10000, 5, 300.0}, 10, o), 1.0);
}

TEST(DetectActivity, SingleAntennaIsUnreliable) {
  LassoOptions o;
  o.known_sparsity = 10;
  EXPECT_LT(detection_rate({64, 20, 1, 10, 0.0}, 100, o), 0.2);
}

TEST(DetectActivity, CovarianceErrorShrinksWithAntennas) {
  auto mean_error = [](Index antennas) {
    double sum = 0.0;
    for (int t = 0; t < 30; ++t) {
      Rng rng = Rng::stream(77, static_cast<std::uint64_t>(t));
      const Support truth = draw_support(32, FixedActivity{4}, rng);
      const PilotDictionary s = gen_gaussian_dictionary(12, 32, rng);
      const ChannelMatrix h = draw_channel_gaussian(antennas, truth, rng);
      const CMatrix y = received_pilot(h.entries, s, NoiseSpec{0.5}, rng);
      const SmvProblem p = build_smv(sample_covariance(y), s, 0.5);
      RVector r = RVector::Zero(32);
      for (int k : truth) r(k) = 1.0;
      sum += (p.x - p.a * r.cast<cplx>()).norm();
    }
    return sum / 30.0;
  };
  const double e_large = mean_error(4096);
  const double e_small = mean_error(1024);
  EXPECT_GT(e_small, e_large);
  // the covariance error scales as 1/sqrt(M): a quarter of the antennas doubles it
  EXPECT_NEAR(e_small / e_large, 2.0, 0.3);
}

TEST(DetectActivity, AgreesWithBruteForceOnTwoSparseNoiselessSketches) {
  Rng rng(13);
  const PilotDictionary s = gen_gaussian_dictionary(8, 12, rng);
  const CMatrix a = khatri_rao(s.entries());
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j) {
      RVector r = RVector::Zero(12);
      r(i) = 1.0;
      r(j) = 0.7;
      const CMatrix phi = s.entries() * r.cast<cplx>().asDiagonal() * s.entries().adjoint();
      const SmvProblem p = build_smv(phi, s, 0.0);
      const oracle::SupportFit best = oracle::best_support_bruteforce(a, p.x, 2);
      LassoOptions o = with_lambda(1e-6);
      o.max_iterations = 20000;
      const DetectionResult res = nn_lasso(p.a, p.x, o);
      EXPECT_EQ(res.support_hat.indices(), best.support) << i << "," << j;
    }
}

TEST(DefaultLambda, FollowsCorrelationScale) {
  Rng rng(14);
  const PilotDictionary s = gen_gaussian_dictionary(6, 16, rng);
  const SmvProblem p = build_smv(sample_covariance(rng.complex_normal_matrix(64, 6)), s, 0.0);
  const double expect = 0.1 * (p.a.adjoint() * p.x).cwiseAbs().maxCoeff() * std::sqrt(std::log(16.0) / 64.0);
  EXPECT_NEAR(default_lambda(p.a, p.x, 64, 0.1), expect, 1e-15);
  EXPECT_THROW(default_lambda(p.a, p.x, 0, 0.1), InvalidParameter);
}
