#include "bvarkit/dynamics.hpp"
#include "bvarkit/error.hpp"

#include "doctest.h"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace bvarkit;

namespace {

Eigen::MatrixXd scalar(double a) { return Eigen::MatrixXd::Constant(1, 1, a); }

ImpulseResponse response_from(const std::vector<double>& values) {
  ImpulseResponse ir;
  ir.horizon = static_cast<int>(values.size()) - 1;
  double run = 0.0;
  for (double v : values) {
    run += v;
    ir.psi.push_back(scalar(v));
    ir.cumulative.push_back(scalar(run));
  }
  return ir;
}

}  // namespace

TEST_CASE("companion matrix layout") {
  Eigen::MatrixXd a1(2, 2), a2(2, 2);
  a1 << 1, 2, 3, 4;
  a2 << 5, 6, 7, 8;
  const Eigen::MatrixXd F = companion(std::vector<Eigen::MatrixXd>{a1, a2});
  Eigen::MatrixXd expected(4, 4);
  expected << 1, 2, 5, 6,
              3, 4, 7, 8,
              1, 0, 0, 0,
              0, 1, 0, 0;
  CHECK(F == expected);
  CHECK(companion(std::vector<Eigen::MatrixXd>{a1}) == a1);
}

TEST_CASE("scalar stability boundary") {
  const auto half = stability(std::vector<Eigen::MatrixXd>{scalar(0.5)});
  CHECK(half.stable);
  CHECK(half.max_modulus() == doctest::Approx(0.5));
  const auto unit = stability(std::vector<Eigen::MatrixXd>{scalar(1.0)});
  CHECK_FALSE(unit.stable);
  CHECK(unit.max_modulus() == doctest::Approx(1.0));
  CHECK_FALSE(stability(std::vector<Eigen::MatrixXd>{scalar(-1.2)}).stable);
}

TEST_CASE("AR(2) roots agree with the characteristic polynomial") {
  // lambda^2 - 1.1 lambda + 0.3 = (lambda - 0.6)(lambda - 0.5)
  const auto s = stability(std::vector<Eigen::MatrixXd>{scalar(1.1), scalar(-0.3)});
  REQUIRE(s.moduli.size() == 2);
  CHECK(s.moduli[0] == doctest::Approx(0.6));
  CHECK(s.moduli[1] == doctest::Approx(0.5));
  CHECK(s.stable);
}

TEST_CASE("companion eigenvalues of the published lag-1 matrix") {
  // Frozen from an independent numpy eigvals run on the transcribed matrix.
  const std::vector<double> expected = {1.0442439662121459, 0.8550507415744065, 0.6224590332700328,
                                        0.6224590332700328, 0.2481879479073896, 0.13881595566282495,
                                        0.07325690035668168};
  const Eigen::MatrixXd A = test::published_lag1_matrix();
  const auto s = stability(std::vector<Eigen::MatrixXd>{A});
  REQUIRE(s.moduli.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(s.moduli[i] - expected[i]) < 1e-10);
  CHECK_FALSE(s.stable);
  for (const auto& root : s.roots) {
    const Eigen::MatrixXcd M = A.cast<std::complex<double>>() - root * Eigen::MatrixXcd::Identity(7, 7);
    CHECK(std::abs(M.determinant()) < 1e-9);
  }
}

TEST_CASE("property: stability is invariant to relabelling variables") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 30; ++trial) {
    const int N = 2 + trial % 4;
    Eigen::MatrixXd a1(N, N), a2(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        a1(i, j) = u(rng);
        a2(i, j) = 0.5 * u(rng);
      }
    Eigen::PermutationMatrix<Eigen::Dynamic> P(N);
    P.setIdentity();
    std::vector<int> idx(N);
    for (int i = 0; i < N; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int i = 0; i < N; ++i) P.indices()(i) = idx[i];
    const Eigen::MatrixXd p1 = P * a1 * P.transpose(), p2 = P * a2 * P.transpose();
    const auto s = stability(std::vector<Eigen::MatrixXd>{a1, a2});
    const auto t = stability(std::vector<Eigen::MatrixXd>{p1, p2});
    REQUIRE(s.moduli.size() == t.moduli.size());
    for (std::size_t i = 0; i < s.moduli.size(); ++i) CHECK(s.moduli[i] == doctest::Approx(t.moduli[i]).epsilon(1e-9));
    CHECK(s.stable == t.stable);
  }
}

TEST_CASE("IRF of a scalar AR(1)") {
  const auto ir = irf(std::vector<Eigen::MatrixXd>{scalar(0.5)}, scalar(1.0), 3, false);
  REQUIRE(ir.psi.size() == 4);
  CHECK(ir.psi[0](0, 0) == 1.0);
  CHECK(ir.psi[1](0, 0) == 0.5);
  CHECK(ir.psi[2](0, 0) == 0.25);
  CHECK(ir.psi[3](0, 0) == 0.125);
  CHECK(ir.cumulative[3](0, 0) == 1.875);
  CHECK(ir.shock_scale == ShockScale::unit);
}

TEST_CASE("IRF of the published matrix matches direct powers") {
  const Eigen::MatrixXd A = test::published_lag1_matrix();
  const auto ir = irf(std::vector<Eigen::MatrixXd>{A}, Eigen::MatrixXd::Identity(7, 7), 20, false);
  CHECK(ir.psi[1](test::kAccidents, test::kRoadSpeed) == 0.76);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(7, 7);
  for (int h = 0; h <= 20; ++h) {
    CHECK((ir.psi[h] - power).cwiseAbs().maxCoeff() < 1e-10);
    power = A * power;
  }
}

TEST_CASE("IRF of a VAR(2) matches companion powers") {
  Eigen::MatrixXd a1(2, 2), a2(2, 2);
  a1 << 0.5, 0.1, -0.2, 0.3;
  a2 << 0.1, 0.0, 0.05, -0.1;
  const std::vector<Eigen::MatrixXd> A{a1, a2};
  const auto ir = irf(A, Eigen::MatrixXd::Identity(2, 2), 15, false);
  const Eigen::MatrixXd F = companion(A);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(4, 4);
  for (int h = 0; h <= 15; ++h) {
    CHECK((ir.psi[h] - power.topLeftCorner(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    power = F * power;
  }
}

TEST_CASE("orthogonalized impact reproduces Sigma") {
  Eigen::MatrixXd sigma(3, 3);
  sigma << 2.0, 0.3, -0.4,
           0.3, 1.0, 0.2,
          -0.4, 0.2, 0.5;
  const auto ir = irf(std::vector<Eigen::MatrixXd>{test::strong_var1_matrix()}, sigma, 5, true);
  CHECK(ir.orthogonalized);
  CHECK(ir.shock_scale == ShockScale::one_sd_cholesky);
  CHECK((ir.psi[0] * ir.psi[0].transpose() - sigma).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(ir.psi[0](0, 1) == 0.0);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(2, 2) = -1.0;
  try {
    (void)irf(std::vector<Eigen::MatrixXd>{test::strong_var1_matrix()}, bad, 5, true);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_positive_definite);
  }
}

TEST_CASE("property: long-run cumulative response equals (I - A)^-1 for stable systems") {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int N = 1 + trial % 4;
    Eigen::MatrixXd a(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) a(i, j) = u(rng);
    const double rho = stability(std::vector<Eigen::MatrixXd>{a}).max_modulus();
    a *= 0.8 / rho;
    const auto ir = irf(std::vector<Eigen::MatrixXd>{a}, Eigen::MatrixXd::Identity(N, N), 1000, false);
    const Eigen::MatrixXd lr = (Eigen::MatrixXd::Identity(N, N) - a).inverse();
    CHECK((ir.cumulative.back() - lr).cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, lr.cwiseAbs().maxCoeff()));

    const auto ir200 = irf(std::vector<Eigen::MatrixXd>{a}, Eigen::MatrixXd::Identity(N, N), 200, false);
    CHECK(ir200.psi.back().cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("classify_effect on hand-built responses") {
  const auto up = classify_effect(response_from({0.0, 0.3, -0.1, 0.2, 0.05}), 0, 0);
  CHECK(up.direction == EffectDirection::increases);
  CHECK(up.share_positive == 1.0);
  CHECK(up.peak_period == 1);

  const auto down = classify_effect(response_from({0.0, -0.5, 0.2, 0.1, 0.1}), 0, 0);
  // Cumulative: -0.5, -0.3, -0.2, -0.1
  CHECK(down.direction == EffectDirection::decreases);
  CHECK(down.share_positive == 0.0);

  const auto tie = classify_effect(response_from({0.0, 1.0, -2.0}), 0, 0);
  CHECK(tie.direction == EffectDirection::indeterminate);
  CHECK(tie.share_positive == 0.5);
}

TEST_CASE("classify_effect settle period") {
  const auto ir = irf(std::vector<Eigen::MatrixXd>{scalar(0.5)}, scalar(1.0), 20, false);
  const auto v = classify_effect(ir, 0, 0, 1e-3);
  // 0.5^10 < 1e-3 <= 0.5^9
  REQUIRE(v.settle_period.has_value());
  CHECK(*v.settle_period == 10);
  CHECK(v.peak_period == 0);

  const auto never = classify_effect(irf(std::vector<Eigen::MatrixXd>{scalar(0.99)}, scalar(1.0), 20, false), 0, 0);
  CHECK_FALSE(never.settle_period.has_value());
}

TEST_CASE("property: classification is invariant to positive rescaling") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> values(12);
    for (auto& x : values) x = normal(rng);
    const auto base = classify_effect(response_from(values), 0, 0);
    for (double k : {1e-3, 7.0, 1e4}) {
      std::vector<double> scaled = values;
      for (auto& x : scaled) x *= k;
      const auto v = classify_effect(response_from(scaled), 0, 0);
      CHECK(v.direction == base.direction);
      CHECK(v.share_positive == base.share_positive);
    }
  }
}

TEST_CASE("cumulative responses of the published matrix agree with brute force") {
  const Eigen::MatrixXd A = test::published_lag1_matrix();
  const int H = 50;
  const auto ir = irf(std::vector<Eigen::MatrixXd>{A}, Eigen::MatrixXd::Identity(7, 7), H, false);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(7, 7), sum = Eigen::MatrixXd::Zero(7, 7);
  for (int h = 0; h <= H; ++h) {
    sum += power;
    power = A * power;
  }
  CHECK((ir.cumulative.back() - sum).cwiseAbs().maxCoeff() <= 1e-9 * sum.cwiseAbs().maxCoeff());

  // The most negative terminal response of accidents is to population.
  int most_negative = -1;
  double lowest = 0.0;
  for (int j = 1; j < 7; ++j) {
    if (sum(test::kAccidents, j) < lowest) {
      lowest = sum(test::kAccidents, j);
      most_negative = j;
    }
  }
  CHECK(most_negative == test::kPopulation);
  for (int j = 1; j < 7; ++j) {
    const auto v = classify_effect(ir, test::kAccidents, j);
    int positive = 0;
    for (int h = 1; h <= H; ++h) positive += ir.cumulative[h](test::kAccidents, j) > 0.0;
    CHECK(v.share_positive == doctest::Approx(positive / static_cast<double>(H)));
  }
}

TEST_CASE("output CSV layouts") {
  const auto s = stability(std::vector<Eigen::MatrixXd>{scalar(0.5)});
  std::ostringstream roots;
  write_roots_csv(roots, s);
  CHECK(roots.str() == "index,real,imaginary,modulus\n0,0.5,0,0.5\n");

  const auto ir = irf(std::vector<Eigen::MatrixXd>{scalar(0.5)}, scalar(1.0), 1, false);
  std::ostringstream irf_out;
  write_irf_csv(irf_out, ir, {"x"});
  CHECK(irf_out.str().rfind("h,impulse,response,value,cumulative,orthogonalized\n", 0) == 0);

  std::ostringstream verdicts;
  write_verdicts_csv(verdicts, {classify_effect(ir, 0, 0)}, {"x"});
  CHECK(verdicts.str().rfind("source,direction,share_positive,peak_period,settle_period\n", 0) == 0);
}
