#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "kdvb/params.hpp"

using namespace kdvb;
using cd = std::complex<double>;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

PhysicalParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.1, 5.0);
  std::bernoulli_distribution flip(0.5);
  const auto signed_mag = [&] { return flip(rng) ? mag(rng) : -mag(rng); };
  return {signed_mag(), signed_mag(), signed_mag(), signed_mag(), signed_mag(),
          cd{signed_mag(), signed_mag()}};
}

}  // namespace

TEST(Reduce, FigureSevenCoefficients) {
  const auto r = reduce({2.0, 1.0, 3.0, 2.0, -0.04, {}});
  EXPECT_NEAR(r.p, -0.08, 1e-15);
  EXPECT_NEAR(r.q, 4.0 / 27.0, 1e-15);
  EXPECT_EQ(r.theta0, cd{});
  EXPECT_EQ(r.delta, 0.0);
  EXPECT_EQ(r.k, 0.0);
}

TEST(Reduce, ZeroVelocityStandardEquation) {
  const auto r = reduce({1.0, 1.0, 1.0, 0.0, 0.0, {}});
  EXPECT_EQ(r.p, 0.0);
  EXPECT_EQ(r.q, 0.0);
}

TEST(Reduce, DirectSubstitution) {
  const auto r = reduce({1.0, 2.0, 1.0, 3.0, 1.0, {}});
  EXPECT_DOUBLE_EQ(r.p, 0.25);
  EXPECT_DOUBLE_EQ(r.q, 16.0);
}

TEST(Reduce, PhaseMapsWithCoordinateScale) {
  const auto r = reduce({2.0, 4.0, 1.0, 0.0, 0.0, cd{1.0, -3.0}});
  EXPECT_DOUBLE_EQ(r.theta0.real(), 2.0);
  EXPECT_DOUBLE_EQ(r.theta0.imag(), -6.0);
}

TEST(Validate, RejectsExactZerosOnly) {
  EXPECT_THROW(reduce({0.0, 1.0, 1.0, 0.0, 0.0, {}}), DomainError);
  EXPECT_THROW(reduce({1.0, 0.0, 1.0, 0.0, 0.0, {}}), DomainError);
  EXPECT_THROW(reduce({1.0, 1.0, 0.0, 0.0, 0.0, {}}), DomainError);
  EXPECT_NO_THROW(reduce({1e-300, 1e-150, 1e-300, 0.0, 0.0, {}}));
  EXPECT_THROW(to_physical_amplitude(1.0, {1.0, 0.0, 1.0, 0.0, 0.0, {}}), DomainError);
  EXPECT_THROW(to_reduced_coordinate(0.0, 0.0, {0.0, 1.0, 1.0, 0.0, 0.0, {}}), DomainError);
}

TEST(Amplitude, Examples) {
  EXPECT_EQ(to_physical_amplitude(0.0, {3.0, -2.0, 7.0, 1.0, 0.0, {}}), cd{});
  EXPECT_DOUBLE_EQ(to_physical_amplitude(1.0, {2.0, 1.0, 1.0, 0.0, 0.0, {}}).real(), 1.0);
  // 2 * 25 / (2 * 1) * 3/50
  EXPECT_DOUBLE_EQ(to_physical_amplitude(3.0 / 50.0, {1.0, 5.0, 2.0, 0.0, 0.0, {}}).real(), 1.5);
}

TEST(Coordinate, Examples) {
  const PhysicalParams params{2.0, 4.0, 1.0, 0.0, 0.7, {}};
  EXPECT_EQ(to_reduced_coordinate(0.7 * 3.0, 3.0, params), cd{});
  EXPECT_NEAR(to_reduced_coordinate(10.0 * 2.0 / 4.0 + 0.7 * 3.0, 3.0, params).real(), 10.0,
              1e-14);

  PhysicalParams phased{2.0, 4.0, 1.0, 0.0, 0.7, cd{0.0, 5.0 * std::numbers::pi * 2.0 / 4.0}};
  const auto theta = to_reduced_coordinate(0.0, 0.0, phased);
  EXPECT_NEAR(theta.real(), 0.0, 1e-15);
  EXPECT_NEAR(theta.imag(), -5.0 * std::numbers::pi, 1e-14);
}

TEST(Properties, AmplitudeAndCoordinateRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    const auto params = random_params(rng);
    const cd w{u(rng), u(rng)};
    const auto back = to_reduced_amplitude(to_physical_amplitude(w, params), params);
    EXPECT_LE(std::abs(back - w), 1e-12 * std::abs(w));

    const double x = u(rng), t = u(rng);
    const auto theta = to_reduced_coordinate(x, t, params);
    const auto xi = to_travelling_coordinate(theta, params);
    const cd expected{x - params.v * t, 0.0};
    EXPECT_LE(std::abs(xi - expected), 1e-12 * std::max(1.0, std::abs(x) + std::abs(params.v * t)));
  }
}

TEST(Properties, VelocityForInvertsReduce) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    auto params = random_params(rng);
    for (double p = -10.0; p <= 10.0; p += 0.5) {
      params.v = velocity_for(p, params);
      EXPECT_LE(rel(reduce(params).p, p), 1e-14) << p;
    }
  }
}

TEST(Properties, CoordinateIsAffineInX) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const auto params = random_params(rng);
    const double x = u(rng), dx = u(rng), t = u(rng);
    const auto diff = to_reduced_coordinate(x + dx, t, params) - to_reduced_coordinate(x, t, params);
    const double expected = params.mu * dx / params.s;
    EXPECT_LE(std::abs(diff - expected),
              1e-14 * std::max(1.0, std::abs(params.mu / params.s) * (std::abs(x) + std::abs(dx) +
                                                                     std::abs(params.v * t))));
  }
}
