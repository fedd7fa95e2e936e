#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "silt/dynkin.hpp"
#include "silt/errors.hpp"
#include "silt/functionals.hpp"
#include "silt/path.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

// Counts maps {1..k} -> {1..l} that are non-decreasing and onto.
long long brute_force_surjections(int k, int l) {
  long long total = 1, count = 0;
  for (int i = 0; i < k; ++i) total *= l;
  std::vector<int> map(static_cast<std::size_t>(k));
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    for (int i = 0; i < k; ++i) {
      map[static_cast<std::size_t>(i)] = static_cast<int>(c % l);
      c /= l;
    }
    bool ok = true;
    for (int i = 1; i < k && ok; ++i) ok = map[static_cast<std::size_t>(i - 1)] <= map[static_cast<std::size_t>(i)];
    std::vector<bool> hit(static_cast<std::size_t>(l), false);
    for (int v : map) hit[static_cast<std::size_t>(v)] = true;
    for (bool h : hit) ok = ok && h;
    count += ok;
  }
  return count;
}

double one(std::span<const double>) { return 1.0; }

TEST(DynkinB, ConstantFunctionCountsSurjections) {
  for (int k = 1; k <= 8; ++k) {
    for (int l = 1; l <= k; ++l) {
      const long long expected = brute_force_surjections(k, l);
      EXPECT_EQ(silt::monotone_surjection_count(k, l), expected);
      const auto b = silt::dynkin_B(k, l, one);
      std::vector<double> s(static_cast<std::size_t>(l));
      for (int j = 0; j < l; ++j) s[static_cast<std::size_t>(j)] = (j + 1.0) / (l + 1.0);
      EXPECT_EQ(b(s), static_cast<double>(expected)) << k << "," << l;
    }
  }
}

TEST(DynkinB, Examples) {
  const auto b42 = silt::dynkin_B(4, 2, one);
  EXPECT_EQ(b42(std::vector<double>{0.2, 0.7}), 3.0);
  const auto sum = [](std::span<const double> t) { return t[0] + t[1]; };
  const auto b21 = silt::dynkin_B(2, 1, sum);
  EXPECT_DOUBLE_EQ(b21(std::vector<double>{0.3}), 0.6);
  const auto weighted = [](std::span<const double> t) { return t[0] + 10.0 * t[1] + 100.0 * t[2]; };
  const auto b33 = silt::dynkin_B(3, 3, weighted);
  EXPECT_DOUBLE_EQ(b33(std::vector<double>{0.1, 0.2, 0.3}), weighted(std::vector<double>{0.1, 0.2, 0.3}));
  // (k=3, l=2): surjections (1,1,2) and (1,2,2)
  const auto b32 = silt::dynkin_B(3, 2, weighted);
  EXPECT_DOUBLE_EQ(b32(std::vector<double>{0.1, 0.2}), (0.1 + 1.0 + 20.0) + (0.1 + 2.0 + 20.0));
}

TEST(DynkinB, Validation) {
  EXPECT_THROW(silt::dynkin_B(2, 3, one), silt::DomainError);
  EXPECT_THROW(silt::dynkin_B(2, 0, one), silt::DomainError);
  EXPECT_EQ(silt::monotone_surjection_count(2, 3), 0);
}

TEST(DynkinT, OrderTwoIsSiltAtVarianceEpsSquared) {
  const auto path = silt::sample_path(512, 2, 61);
  const auto quad = silt::SimplexQuadrature::graded(16, 8, 8);
  const std::vector<double> zero{0.0, 0.0};
  for (double eps : {0.3, 0.1, 0.03}) {
    const double t = silt::dynkin_T(path, 2, eps, one, silt::gaussian_mollifier, quad);
    const double s = silt::silt_epsilon(path, eps * eps, zero, quad);
    EXPECT_NEAR(t, s, 1e-12 * s) << eps;
  }
}

TEST(DynkinT, ZeroPath) {
  const silt::Path path(4, 2, std::vector<double>(10, 0.0));
  const double eps = 0.2;
  const double q0 = 1.0 / (2.0 * kPi * eps * eps);
  const auto q2 = silt::SimplexQuadrature::tensor_gauss(2, 4);
  const auto q3 = silt::SimplexQuadrature::tensor_gauss(3, 4);
  EXPECT_NEAR(silt::dynkin_T(path, 2, eps, one, silt::gaussian_mollifier, q2), 0.5 * q0, 1e-13);
  EXPECT_NEAR(silt::dynkin_T(path, 3, eps, one, silt::gaussian_mollifier, q3), q0 * q0 / 6.0, 1e-11);
}

TEST(DynkinT, OrderOneIsPlainIntegral) {
  const auto path = silt::sample_path(64, 2, 1);
  const auto q1 = silt::SimplexQuadrature::tensor_gauss(1, 8);
  const auto phi = [](std::span<const double> t) { return t[0] * t[0]; };
  EXPECT_NEAR(silt::dynkin_T(path, 1, 0.1, phi, silt::gaussian_mollifier, q1), 1.0 / 3.0, 1e-14);
}

TEST(DynkinT, Validation) {
  const auto q2 = silt::SimplexQuadrature::tensor_gauss(2, 4);
  const auto q4 = silt::SimplexQuadrature::tensor_gauss(4, 2);
  const auto p2 = silt::sample_path(16, 2, 1);
  const auto p3 = silt::sample_path(16, 3, 1);
  EXPECT_THROW(silt::dynkin_T(p3, 2, 0.1, one, silt::gaussian_mollifier, q2), silt::DomainError);
  EXPECT_THROW(silt::dynkin_T(p2, 4, 0.1, one, silt::gaussian_mollifier, q4), silt::UnsupportedRegime);
  EXPECT_THROW(silt::dynkin_T(p2, 2, 0.0, one, silt::gaussian_mollifier, q2), silt::DomainError);
  EXPECT_THROW(silt::dynkin_T(p2, 3, 0.1, one, silt::gaussian_mollifier, q2), silt::DomainError);
}

TEST(DynkinRenormalized, OrderTwoCombination) {
  const auto path = silt::sample_path(256, 2, 12);
  const auto q1 = silt::SimplexQuadrature::tensor_gauss(1, 16);
  const auto q2 = silt::SimplexQuadrature::graded(14, 8, 6);
  const double eps = 0.05;
  auto rule = [&](int l) -> const silt::SimplexQuadrature& { return l == 1 ? q1 : q2; };
  const double got = silt::dynkin_renormalized(path, 2, eps, one, silt::gaussian_mollifier, rule);
  const double t2 = silt::dynkin_T(path, 2, eps, one, silt::gaussian_mollifier, q2);
  EXPECT_NEAR(got, t2 + std::log(eps) / (2.0 * kPi), 1e-12);
}

TEST(DynkinRenormalized, OrderThreeRelativeChangeShrinks) {
  const auto q1 = silt::SimplexQuadrature::tensor_gauss(1, 32);
  const auto q2 = silt::SimplexQuadrature::graded(16, 8, 8);
  const auto q3 = silt::SimplexQuadrature::tensor_gauss(3, 40);
  auto rule = [&](int l) -> const silt::SimplexQuadrature& { return l == 1 ? q1 : (l == 2 ? q2 : q3); };
  const std::vector<double> eps{0.4, 0.2, 0.1};
  std::vector<double> mean(eps.size(), 0.0);
  const int paths = 6;
  for (int i = 0; i < paths; ++i) {
    const auto path = silt::sample_path(2048, 2, 77, static_cast<std::uint64_t>(i));
    for (std::size_t e = 0; e < eps.size(); ++e) {
      mean[e] += silt::dynkin_renormalized(path, 3, eps[e], one, silt::gaussian_mollifier, rule) / paths;
    }
  }
  const double c1 = std::abs(mean[1] - mean[0]) / std::abs(mean[1]);
  const double c2 = std::abs(mean[2] - mean[1]) / std::abs(mean[2]);
  EXPECT_TRUE(std::isfinite(c2));
  EXPECT_LT(c2, c1);
}

}  // namespace
