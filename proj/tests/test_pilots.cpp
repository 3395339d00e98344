// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gfad/pilots.hpp"
#include "oracles.hpp"

using namespace gfad;

TEST(GaussianDictionary, UnitNormColumns) {
  Rng rng(1);
  const PilotDictionary s = gen_gaussian_dictionary(20, 64, rng);
  ASSERT_EQ(s.length(), 20);
  ASSERT_EQ(s.nodes(), 64);
  for (Index k = 0; k < 64; ++k) EXPECT_NEAR(s.entries().col(k).norm(), 1.0, 1e-10);
  EXPECT_EQ(s.kind(), PilotKind::GaussianRandom);
}

TEST(GaussianDictionary, SquareRandomDrawIsCoherent) {
  Rng rng(2);
  const PilotDictionary s = gen_gaussian_dictionary(8, 8, rng);
  EXPECT_GT(s.coherence(), 0.0);
}

TEST(GaussianDictionary, CoherenceNeverBelowWelchBound) {
  const double floor = welch_bound(64, 20);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng = Rng::stream(seed, 0);
    const PilotDictionary s = gen_gaussian_dictionary(20, 64, rng);
    EXPECT_GE(s.coherence(), floor - 1e-12);
    EXPECT_LT(s.coherence(), 1.0);
  }
}

TEST(PilotDictionary, RejectsZeroColumnAndNormalizes) {
  CMatrix m = CMatrix::Zero(3, 2);
  m(0, 0) = 2.0;
  EXPECT_THROW(PilotDictionary{m}, InvalidParameter);
  m(1, 1) = cplx(0, 5);
  const PilotDictionary s(m);
  EXPECT_NEAR(s.entries().col(1).norm(), 1.0, 1e-15);
  EXPECT_EQ(s.kind(), PilotKind::UserSupplied);
}

TEST(NormalizeColumns, Idempotent) {
  Rng rng(3);
  const CMatrix raw = rng.complex_normal_matrix(7, 11, 3.0);
  const CMatrix once = normalize_columns(raw);
  const CMatrix twice = normalize_columns(once);
  EXPECT_LT((once - twice).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MutualCoherence, OrthonormalIsZero) {
  EXPECT_NEAR(mutual_coherence(CMatrix::Identity(5, 5)), 0.0, 1e-15);
}

TEST(MutualCoherence, DuplicatedColumnIsOne) {
  Rng rng(4);
  CMatrix m = rng.complex_normal_matrix(6, 3);
  m.col(2) = m.col(0) * cplx(0.0, -3.0);
  EXPECT_NEAR(mutual_coherence(m), 1.0, 1e-12);
}

TEST(MutualCoherence, TwoColumnHandExample) {
  CMatrix m(2, 2);
  m << 1.0, 1.0 / std::sqrt(2.0),  //
      0.0, 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(mutual_coherence(m), 0.70711, 1e-5);
  EXPECT_NEAR(mutual_coherence(m), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(MutualCoherence, NeedsTwoColumns) {
  EXPECT_THROW(mutual_coherence(CMatrix::Ones(3, 1)), InvalidParameter);
  EXPECT_THROW(mutual_coherence(PilotDictionary(CMatrix::Ones(3, 1))), InvalidParameter);
}

TEST(MutualCoherence, MatchesPairScanOracle) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const CMatrix m = rng.complex_normal_matrix(5, 9);
    EXPECT_NEAR(mutual_coherence(m), oracle::coherence_pairs(m), 1e-12);
  }
}

TEST(KhatriRao, MatchesLoopConstruction) {
  Rng rng(6);
  const CMatrix s = rng.complex_normal_matrix(4, 6);
  EXPECT_LT((khatri_rao(s) - oracle::khatri_rao_loops(s)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(KhatriRao, VectorizesDiagonalCovariance) {
  Rng rng(7);
  for (int t = 0; t < 25; ++t) {
    const CMatrix s = normalize_columns(rng.complex_normal_matrix(5, 8));
    RVector r(8);
    for (Index k = 0; k < 8; ++k) r(k) = rng.uniform(0.0, 2.0);
    EXPECT_LT((khatri_rao(s) * r.cast<cplx>() - oracle::vec_outer_sum(s, r)).norm(), 1e-10);
  }
}

TEST(KhatriRaoCoherence, Endpoints) {
  EXPECT_EQ(khatri_rao_coherence(0.0), 0.0);
  EXPECT_EQ(khatri_rao_coherence(1.0), 1.0);
  EXPECT_THROW(khatri_rao_coherence(1.5), InvalidParameter);
  EXPECT_THROW(khatri_rao_coherence(-0.1), InvalidParameter);
}

TEST(KhatriRaoCoherence, TwoColumnExampleMatchesExplicitConstruction) {
  CMatrix m(2, 2);
  m << 1.0, 1.0 / std::sqrt(2.0),  //
      0.0, 1.0 / std::sqrt(2.0);
  const double mu = mutual_coherence(m);
  EXPECT_NEAR(khatri_rao_coherence(mu), 0.5, 1e-12);
  EXPECT_NEAR(oracle::coherence_pairs(oracle::khatri_rao_loops(m)), khatri_rao_coherence(mu), 1e-12);
}

TEST(KhatriRaoCoherence, ExplicitCoherenceEqualsSquareForRandomDictionaries) {
  Rng rng(8);
  for (int t = 0; t < 40; ++t) {
    const Index len = 2 + t % 7;
    const Index nodes = 2 + (t * 5) % 11;
    const CMatrix s = normalize_columns(rng.complex_normal_matrix(len, nodes));
    const double mu = oracle::coherence_pairs(s);
    EXPECT_NEAR(oracle::coherence_pairs(oracle::khatri_rao_loops(s)), khatri_rao_coherence(mu), 1e-10);
  }
}

TEST(WelchBound, Values) {
  EXPECT_NEAR(welch_bound(64, 20), 0.18687, 5e-6);
  EXPECT_NEAR(welch_bound(64, 20), std::sqrt(44.0 / (63.0 * 20.0)), 1e-15);
  EXPECT_EQ(welch_bound(20, 20), 0.0);
  EXPECT_EQ(welch_bound(10, 20), 0.0);
  EXPECT_NEAR(welch_bound(2, 1), 1.0, 1e-15);
}

TEST(MaxIdentifiableSupport, Values) {
  EXPECT_EQ(max_identifiable_support(1.0), 0);
  EXPECT_EQ(max_identifiable_support(0.5), 2);
  EXPECT_EQ(max_identifiable_support(0.18687), 14);
  EXPECT_THROW(max_identifiable_support(0.0), InvalidParameter);
  EXPECT_THROW(max_identifiable_support(-0.3), InvalidParameter);
}

TEST(MaxIdentifiableSupport, StrictInequalityAtIntegerBoundary) {
  // mu^2 = 1/3: (1 + 3)/2 = 2 exactly, so D must be < 2
  EXPECT_EQ(max_identifiable_support(std::sqrt(1.0 / 3.0)), 1);
}

TEST(MaxIdentifiableSupport, NonIncreasingInMu) {
  int previous = max_identifiable_support(0.01);
  for (double mu = 0.011; mu <= 1.0; mu += 0.001) {
    const int d = max_identifiable_support(mu);
    EXPECT_LE(d, previous) << "mu=" << mu;
    previous = d;
  }
}

TEST(MinPilotLength, Values) {
  EXPECT_EQ(min_pilot_length(64, 10), 15);
  EXPECT_EQ(min_pilot_length(64, 1), 2);
}

TEST(MinPilotLength, NeverExceedsKAndSatisfiesStrictBound) {
  for (int k = 2; k <= 40; ++k)
    for (int d = 1; d <= k; ++d) {
      const int len = min_pilot_length(k, d);
      EXPECT_LE(len, k);
      const double bound = (2.0 * k * d - k) / (k + 2.0 * d - 2.0);
      if (len < k) {
        EXPECT_GT(len, bound);
        EXPECT_LE(len - 1, bound);
      }
    }
  EXPECT_THROW(min_pilot_length(64, 0), InvalidParameter);
  EXPECT_THROW(min_pilot_length(1, 1), InvalidParameter);
}

TEST(DictionaryCsv, RoundTripIsExact) {
  Rng rng(9);
  const PilotDictionary s = gen_gaussian_dictionary(5, 7, rng);
  std::stringstream buf;
  write_dictionary_csv(s, buf);
  const PilotDictionary back = read_dictionary_csv(buf);
  ASSERT_EQ(back.length(), 5);
  ASSERT_EQ(back.nodes(), 7);
  EXPECT_LT((back.entries() - s.entries()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(back.coherence(), s.coherence(), 1e-15);
}

TEST(DictionaryCsv, MalformedInputRejected) {
  std::stringstream bad_header("L=2;K=2\n1,0,1,0\n");
  EXPECT_THROW(read_dictionary_csv(bad_header), InvalidParameter);
  std::stringstream short_row("L=2,K=2\n1,0,0,0\n0,0\n");
  EXPECT_THROW(read_dictionary_csv(short_row), InvalidParameter);
  EXPECT_THROW(read_dictionary_csv(std::filesystem::path("/nonexistent/dir/s.csv")), IoError);
}
