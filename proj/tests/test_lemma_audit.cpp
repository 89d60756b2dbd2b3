#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "regulo/error.hpp"
#include "regulo/lemma_audit.hpp"
#include "regulo/poly_engine.hpp"

using namespace regulo;
using namespace regulo::audit;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected regulo::Error";
  return ErrorKind::io_error;
}

}  // namespace

TEST(Quadrature, SmoothIntegrals) {
  const auto r = integrate([](double x) { return std::sin(x); }, 0.0, kPi, 1e-13, 1);
  EXPECT_NEAR(r.value, 2.0, 1e-13);
  EXPECT_LE(r.error_estimate, 1e-13);
  const auto back = integrate([](double x) { return x * x; }, 1.0, 0.0, 1e-13, 3);
  EXPECT_NEAR(back.value, -1.0 / 3, 1e-14);
}

TEST(Quadrature, OscillatoryIntegral) {
  // int_0^{pi/2} cos(200 x)^2 dx = pi/4.
  const auto r = integrate([](double x) { return std::cos(200 * x) * std::cos(200 * x); }, 0.0,
                           kPi / 2, 1e-12, 4);
  EXPECT_NEAR(r.value, kPi / 4, 1e-11);
  EXPECT_GT(r.panels_used, 4u);
}

TEST(Quadrature, BudgetExhaustion) {
  EXPECT_EQ(kind_of([] {
              integrate([](double x) { return std::sin(1e4 * x); }, 0.0, 3.0, 1e-14, 1, 300);
            }),
            ErrorKind::non_convergence);
}

TEST(CosProduct, Examples) {
  EXPECT_EQ(cos_product(4, 3, 0.0), 1.0);
  EXPECT_NEAR(cos_product(4, 0, kPi / 2), 0.0, 1e-15);
  EXPECT_NEAR(cos_product(4, 1, 0.01), 0.993815515783069186860068608816775, 1e-12);
}

TEST(CosProduct, LogFormAvoidsUnderflow) {
  const auto lp = cos_product_log(10, 200, 1.0);
  EXPECT_NE(lp.sign, 0);
  EXPECT_NEAR(lp.log_abs, -1250.5559176206686, 1e-6);
  EXPECT_EQ(cos_product(10, 200, 1.0), 0.0);  // below the double range
  const auto moderate = cos_product_log(6, 30, 0.7);
  EXPECT_NEAR(moderate.sign * std::exp(moderate.log_abs), cos_product(6, 30, 0.7), 1e-15);
}

TEST(CoefficientQuadrature, Examples) {
  const auto a = coefficient_by_quadrature(4, 0, 3);
  EXPECT_NEAR(a.value, 2.0, 1e-6);
  EXPECT_NEAR(coefficient_by_quadrature(4, 1, 10).value, 4.0, 1e-6);
  EXPECT_NEAR(coefficient_by_quadrature(5, 1, 0).value, 1.0, 1e-6);
}

TEST(CoefficientQuadrature, MatchesExactSmallCases) {
  for (int k = 2; k <= 7; ++k) {
    for (int m = 0; (k - 1) * (m + 1) <= 12; ++m) {
      const auto p = build(k, m);
      for (std::uint64_t n = 0; n <= p.degree(); n += 2) {
        const auto q = coefficient_by_quadrature(k, m, static_cast<long long>(n));
        const double exact = p[n].convert_to<double>();
        EXPECT_LE(std::abs(q.value - exact), std::max(1e-6, q.error_estimate))
            << k << "," << m << "," << n;
      }
    }
  }
}

TEST(CoefficientQuadrature, ResolutionGuard) {
  EXPECT_EQ(kind_of([] { coefficient_by_quadrature(5, 10, 3); }), ErrorKind::resolution_guard);
  EXPECT_EQ(kind_of([] { coefficient_by_quadrature(4, 1, 25); }), ErrorKind::invalid_parameter);
}

TEST(SplitIntegral, PositiveAtThreshold) {
  for (long long mu : {1LL, 774LL}) {
    const auto s = eval_I(4, 64, mu);
    EXPECT_GT(s.value() - s.error_estimate(), 0.0) << mu;
    EXPECT_NEAR(s.value(), s.head.value + s.middle.value + s.tail.value, 1e-30);
  }
  EXPECT_EQ(mu_cap(4, 64), 774);
}

TEST(SplitIntegral, ReferenceValues) {
  // Independent 30-digit evaluations.
  EXPECT_NEAR(eval_I(4, 64, 1).head.value, 1.34514135668e-10, 1e-19);
  EXPECT_NEAR(eval_I(4, 64, 100).head.value, 1.34363504710e-8, 1e-17);
  EXPECT_NEAR(eval_I(4, 64, 774).head.value, 9.73529140909e-8, 1e-17);
  EXPECT_NEAR(eval_I(4, 2, 34).value(), 0.0012370731735744, 1e-13);
  EXPECT_NEAR(eval_I(4, 2, 35).value(), 0.00157403204957, 1e-13);
}

TEST(SplitIntegral, SplitPoints) {
  const auto s = eval_I(4, 64, 5);
  EXPECT_DOUBLE_EQ(s.first_split, 2 * kPi / (12.0 * 129));
  EXPECT_DOUBLE_EQ(s.second_split, kPi / 518.0);
}

TEST(SplitIntegral, SignMatchesCoefficientDifference) {
  // d(n) - d(n-1) carries the frequency N - 2n + 1; for D_{4,2}, n = 10 gives 35.
  const auto upper = coefficient_by_quadrature(4, 2, 10);
  const auto lower = coefficient_by_quadrature(4, 2, 9);
  const double diff = upper.value - lower.value;
  EXPECT_NEAR(diff, 1.0, 1e-6);
  EXPECT_EQ(diff > 0, eval_I(4, 2, 35).value() > 0);
}

TEST(SplitIntegral, Preconditions) {
  EXPECT_EQ(kind_of([] { eval_I(4, 64, 0); }), ErrorKind::invalid_parameter);
  EXPECT_EQ(kind_of([] { eval_I(10, 200, 5); }), ErrorKind::resolution_guard);
}

TEST(Identities, Examples) {
  const IdentitySample samples[] = {{kPi / 7, 5}, {1.0, 1}, {0.3, 50}};
  const auto report = check_identities(samples);
  EXPECT_EQ(report.entries.size(), 6u);
  EXPECT_TRUE(report.all_passed());
}

TEST(Identities, RandomSamples) {
  const auto samples = random_identity_samples(1000, 99);
  const auto report = check_identities(samples);
  EXPECT_EQ(report.entries.size(), 2000u);
  EXPECT_TRUE(report.all_passed());
}

TEST(Identities, PoleRejected) {
  const IdentitySample at_pi[] = {{kPi, 3}};
  const IdentitySample at_half_pi[] = {{kPi / 2, 3}};
  EXPECT_EQ(kind_of([&] { check_identities(at_pi); }), ErrorKind::pole_proximity);
  EXPECT_EQ(kind_of([&] { check_identities(at_half_pi); }), ErrorKind::pole_proximity);
}

TEST(Constants, ReferenceValues) {
  EXPECT_NEAR(AnalyticConstants::gamma(), 0.615626, 1e-6);
  EXPECT_NEAR(AnalyticConstants::gamma(), 0.615626470386014, 1e-14);
  EXPECT_NEAR(c_k_of_m(4, 64), 11.0804545571708545, 1e-12);
  EXPECT_LE(c_k_of_m(4, 64), 0.26 * 64);
  EXPECT_NEAR(c_k_of_m(4, 70), 10.9735170592375, 1e-12);
  EXPECT_NEAR(c_k_k4_bracket(), 0.257429758707682, 1e-14);
  EXPECT_NEAR(f_k(4, 64), 5.88436443151787e-9, 1e-21);
  EXPECT_NEAR(g_k(4, 64), 0.546327601931236, 1e-13);
  EXPECT_NEAR(f_k_at_threshold(4), f_k(4, 64), 1e-21);
  EXPECT_NEAR(g_k_at_threshold(4), g_k(4, 64), 1e-13);
}

TEST(Constants, EnvelopeDominatesProduct) {
  const auto thetas = theta_samples(4, 64, 200, 5);
  for (double t : thetas) {
    const auto p = cos_product_log(4, 64, t);
    EXPECT_LE(p.log_abs, log_envelope(4, 64, t) + 1e-9) << t;
    EXPECT_LT(log_envelope(4, 64, t), -0.381 * 64 - 0.224) << t;
  }
}

TEST(Constants, PointChecksAtThreshold) {
  ConstantsSample sample{4, 64, theta_samples(4, 64, 50, 3), {1, 100, 774}};
  const auto report = check_constants(sample);
  EXPECT_TRUE(report.all_passed());
  bool saw_tail = false;
  for (const auto& e : report.entries) {
    if (e.check == "|I3| <= 0.55 I1" && e.parameters.back().second == 100.0) {
      saw_tail = true;
      EXPECT_GT(e.margin, e.error_estimate);
    }
  }
  EXPECT_TRUE(saw_tail);
}

TEST(Constants, DomainChecks) {
  EXPECT_EQ(kind_of([] { check_constants({4, 63, {}, {}}); }), ErrorKind::sample_out_of_domain);
  EXPECT_EQ(kind_of([] { check_constants({3, 200, {}, {}}); }), ErrorKind::sample_out_of_domain);
  EXPECT_EQ(kind_of([] { check_constants({4, 64, {0.001}, {}}); }),
            ErrorKind::sample_out_of_domain);
  EXPECT_EQ(kind_of([] { check_constants({4, 64, {kPi / 8}, {}}); }),
            ErrorKind::sample_out_of_domain);
  EXPECT_EQ(kind_of([] { check_constants({4, 64, {}, {775}}); }),
            ErrorKind::sample_out_of_domain);
  EXPECT_TRUE(beyond_threshold(4, 64));
  EXPECT_FALSE(beyond_threshold(4, 63));
  EXPECT_TRUE(beyond_threshold(5, 90));
  EXPECT_FALSE(beyond_threshold(5, 89));
}

TEST(Constants, Monotonicity) {
  const int ks[] = {4, 5, 6, 7, 8, 9, 10, 11, 12};
  const auto report = check_monotonicity(ks, 64);
  EXPECT_TRUE(report.all_passed());
}

TEST(Audit, DefaultPlanPasses) {
  AuditPlan plan;
  plan.theta_count = 30;
  plan.mu_count = 5;
  plan.identity_samples = 50;
  EXPECT_TRUE(run_lemma_audit(plan).all_passed());
}
