#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "narmax/derive.hpp"
#include "narmax/error.hpp"
#include "narmax/simulate.hpp"
#include "oracles.hpp"

namespace narmax {
namespace {

Polynomial u(int lag, int e = 1, double c = 1.0) { return Polynomial::signal(input(lag), e, c); }
Polynomial y(int lag, int e = 1, double c = 1.0) { return Polynomial::signal(output(lag), e, c); }
Polynomial xi(int lag, int e = 1, double c = 1.0) { return Polynomial::signal(noise(lag), e, c); }

const NarmaxModel kSquaredNoise(u(0) + xi(1, 2));
const NarmaxModel kQuadratic(u(0) - y(1, 2, 0.1));

TEST(RunStochastic, SquaredNoiseZeroRealization) {
  const std::vector<double> uu{1.0, -2.0, 0.5};
  const std::vector<double> zero(3, 0.0);
  EXPECT_EQ(run_stochastic(kSquaredNoise, uu, zero), uu);
}

TEST(RunStochastic, SquaredNoiseConstantRealization) {
  const std::vector<double> uu{1.0, -2.0, 0.5, 3.0};
  const std::vector<double> cst(4, 0.7);
  const auto out = run_stochastic(kSquaredNoise, uu, cst);
  EXPECT_DOUBLE_EQ(out[0], 1.0 + 0.7);  // pre-record noise reads 0
  for (std::size_t k = 1; k < uu.size(); ++k) EXPECT_DOUBLE_EQ(out[k], uu[k] + 0.49 + 0.7);
}

TEST(RunStochastic, QuadraticZeroFixedPoint) {
  const std::vector<double> zero(50, 0.0);
  for (double v : run_stochastic(kQuadratic, zero, zero)) EXPECT_EQ(v, 0.0);
}

TEST(RunStochastic, LengthMismatch) {
  const std::vector<double> a(3), b(4);
  try {
    (void)run_stochastic(kQuadratic, a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}

TEST(RunStochastic, MatchesHandRecursion) {
  std::mt19937_64 rng(1);
  const auto uu = testing::normal_vector(500, rng);
  const auto noise_seq = testing::normal_vector(500, rng);
  const auto out = run_stochastic(kQuadratic, uu, noise_seq);
  const auto ref = testing::quadratic_example_stochastic(uu, noise_seq);
  for (std::size_t k = 0; k < out.size(); ++k) EXPECT_TRUE(testing::close_rel(out[k], ref[k], 1e-12)) << k;
}

TEST(RunStochastic, MatchesNaiveReferenceOnRandomModels) {
  testing::ModelGenerator gen(31);
  for (int i = 0; i < 100; ++i) {
    const NarmaxModel m = i % 2 == 0 ? gen.general_model() : gen.simplified_model(true);
    const auto uu = testing::normal_vector(200, gen.rng(), 0.0, 0.5);
    std::vector<double> noise_seq(200);
    for (auto& x : noise_seq) x = gen.uniform(-1.5, 1.5);
    const auto out = run_stochastic(m, uu, noise_seq);
    const auto ref = testing::reference_stochastic(m, uu, noise_seq);
    for (std::size_t k = 0; k < out.size(); ++k) {
      ASSERT_TRUE(testing::close_rel(out[k], ref[k], 1e-12)) << i << " " << k;
    }
  }
}

TEST(RunStochastic, NonFiniteReportsIndex) {
  const NarmaxModel explosive(u(0) + y(1, 2, 10.0));
  const std::vector<double> uu(100, 5.0), zero(100, 0.0);
  try {
    (void)run_stochastic(explosive, uu, zero);
    FAIL();
  } catch (const NonFiniteError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
    EXPECT_GT(e.index(), 0u);
    EXPECT_LT(e.index(), 100u);
  }
}

TEST(StochasticSimulator, BlocksEqualOneRun) {
  std::mt19937_64 rng(2);
  const NarmaxModel m(u(0) - y(1, 2, 0.1) + u(2, 1, 0.3) + xi(3, 2, 0.2));
  const auto uu = testing::normal_vector(300, rng);
  const auto noise_seq = testing::normal_vector(300, rng);
  const auto whole = run_stochastic(m, uu, noise_seq);
  StochasticSimulator sim(m);
  std::vector<double> pieces(300);
  for (std::size_t start = 0; start < 300; start += 100) {
    sim.run(std::span(uu).subspan(start, 100), std::span(noise_seq).subspan(start, 100),
            std::span(pieces).subspan(start, 100), start);
  }
  EXPECT_EQ(pieces, whole);
}

TEST(RunSimModel, OffsetModel) {
  const SimModel s(u(0) + Polynomial::constant(1.0));
  EXPECT_EQ(run_sim_model(s, std::vector<double>{3.0, 3.0}), (std::vector<double>{4.0, 4.0}));
}

TEST(RunSimModel, QuadraticHandRecursion) {
  const SimModel s = derive_noise_zeroed(kQuadratic);
  const auto out = run_sim_model(s, std::vector<double>{1.0, 1.0});
  EXPECT_DOUBLE_EQ(out[0], 1.0);
  EXPECT_DOUBLE_EQ(out[1], 0.9);
}

TEST(RunSimModel, DerivedModelsMatchStraightLineEvaluators) {
  const std::vector<double> uu{0.3, -1.2, 0.8, 1.9, -0.4, 0.0, 2.2, -1.7, 0.6, 1.1};
  auto check = [&](const SimModel& s, const std::vector<double>& ref) {
    const auto out = run_sim_model(s, uu);
    ASSERT_EQ(out.size(), ref.size());
    for (std::size_t k = 0; k < out.size(); ++k) EXPECT_NEAR(out[k], ref[k], 1e-13) << k;
  };
  check(derive_noise_zeroed(kQuadratic), testing::quadratic_noise_zeroed(uu));
  check(derive_truncated(kQuadratic, 1), testing::quadratic_truncated_1(uu));
  check(derive_truncated(kQuadratic, 2), testing::quadratic_truncated_2(uu));
  check(derive_l_approximate(kQuadratic, 1), testing::quadratic_l1(uu));
}

TEST(RunSimModel, ExactSquaredNoiseClosedForm) {
  std::mt19937_64 rng(4);
  const auto uu = testing::normal_vector(100, rng, 3.0, 1.0);
  const auto out = run_sim_model(derive_exact(kSquaredNoise), uu);
  for (std::size_t k = 0; k < uu.size(); ++k) EXPECT_EQ(out[k], uu[k] + 1.0);
}

TEST(RunSimModel, NonFinite) {
  const SimModel s(u(0) + Polynomial::signal(sim_output(1), 4, 1.0));
  const std::vector<double> uu(50, 3.0);
  EXPECT_THROW(run_sim_model(s, uu), NonFiniteError);
}

TEST(Bounded, ExampleModelsStayFinite) {
  std::mt19937_64 rng(8);
  const auto offset_input = testing::normal_vector(3000, rng, 3.0, 1.0);
  const auto centred_input = testing::normal_vector(3000, rng, 0.0, 1.0);
  const auto noise_seq = sample_noise(3000, 17);
  for (double v : run_stochastic(kSquaredNoise, offset_input, noise_seq)) ASSERT_TRUE(std::isfinite(v));
  for (double v : run_stochastic(kQuadratic, centred_input, noise_seq)) ASSERT_TRUE(std::isfinite(v));
}

TEST(SampleNoise, Deterministic) {
  EXPECT_EQ(sample_noise(1001, 42), sample_noise(1001, 42));
  EXPECT_NE(sample_noise(10, 42), sample_noise(10, 43));
  const auto longer = sample_noise(11, 5);
  const auto shorter = sample_noise(10, 5);
  EXPECT_TRUE(std::equal(shorter.begin(), shorter.end(), longer.begin()));
}

TEST(SampleNoise, DocumentedAlgorithm) {
  std::mt19937_64 engine(123);
  const double two_pi = 2.0 * std::acos(-1.0);
  const double a = static_cast<double>((engine() >> 11) + 1) * 0x1.0p-53;
  const double b = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(a));
  const auto draws = sample_noise(2, 123);
  EXPECT_DOUBLE_EQ(draws[0], r * std::cos(two_pi * b));
  EXPECT_DOUBLE_EQ(draws[1], r * std::sin(two_pi * b));
}

TEST(SampleNoise, Moments) {
  const auto draws = sample_noise(1'000'000, 2024);
  const double m = std::accumulate(draws.begin(), draws.end(), 0.0) / draws.size();
  double var = 0.0;
  for (double x : draws) var += (x - m) * (x - m);
  var /= draws.size() - 1;
  EXPECT_NEAR(m, 0.0, 0.004);
  EXPECT_NEAR(var, 1.0, 0.005);
}

}  // namespace
}  // namespace narmax
