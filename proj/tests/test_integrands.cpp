#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "regmc/integrands.hpp"
#include "regmc/quadrature.hpp"
#include "support/oracles.hpp"

using namespace regmc;

TEST_CASE("pointwise evaluation examples") {
    const IntegrandSpec sumsin = IntegrandSpec::sum_sin(5);
    const double quarter[5] = {0.25, 0.25, 0.25, 0.25, 0.25};
    CHECK(sumsin.evaluate(quarter) == doctest::Approx(5.0).epsilon(1e-14));

    const IntegrandSpec expsum = IntegrandSpec::exp_sum(1);
    const double zero[1] = {0.0};
    CHECK(expsum.evaluate(zero) == 1.0);

    const IntegrandSpec step = IntegrandSpec::step1d(0.5, 0.0, 1.0);
    const double below[1] = {0.49};
    const double at[1] = {0.5};
    CHECK(step.evaluate(below) == 0.0);
    CHECK(step.evaluate(at) == 1.0);
}

TEST_CASE("evaluation is deterministic and checks dimensions") {
    const IntegrandSpec spec = IntegrandSpec::multi_light(4);
    const double u[3] = {0.3, 0.6, 0.9};
    CHECK(spec.evaluate(u) == spec.evaluate(u));
    const double wrong[2] = {0.3, 0.6};
    CHECK_THROWS_WITH_AS(spec.evaluate(wrong), doctest::Contains("DimensionMismatch"), Error);
}

TEST_CASE("reference integrals: closed forms") {
    CHECK(IntegrandSpec::sum_sin(7).reference().value == 0.0);
    CHECK(IntegrandSpec::step1d(0.5, 0.0, 1.0).reference().value == 0.5);
    CHECK(IntegrandSpec::step1d(0.25, -1.0, 2.0).reference().value ==
          doctest::Approx(-0.25 + 1.5).epsilon(1e-15));

    // (e - 1)^5, cross-checked below by brute-force sampling.
    const Reference expsum5 = IntegrandSpec::exp_sum(5).reference();
    CHECK(expsum5.value == doctest::Approx(14.9786580).epsilon(1e-8));

    const Reference mistoy = IntegrandSpec::mis_toy().reference();
    CHECK(mistoy.value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("1d references match a one-million-point quadrature") {
    const IntegrandSpec specs[] = {IntegrandSpec::shifted_gaussian1d(),
                                   IntegrandSpec::high_freq1d(), IntegrandSpec::poly1d(),
                                   IntegrandSpec::mis_toy(), IntegrandSpec::sum_sin(1),
                                   IntegrandSpec::exp_sum(1)};
    for (const IntegrandSpec& spec : specs) {
        const double oracle = quadrature::simpson(
            [&](double x) {
                const double u[1] = {x};
                return spec.evaluate(u);
            },
            1000000);
        const Reference ref = spec.reference();
        CHECK(std::abs(ref.value - oracle) <=
              std::max(ref.tolerance, 1e-10 * std::max(1.0, std::abs(oracle))));
    }
    // The step breakpoint aligns with even panel counts under the midpoint rule.
    const IntegrandSpec step = IntegrandSpec::step1d();
    const double oracle = quadrature::midpoint(
        [&](double x) {
            const double u[1] = {x};
            return step.evaluate(u);
        },
        1000000);
    CHECK(step.reference().value == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("high-dimensional reference cross-checked by brute-force sampling") {
    const IntegrandSpec spec = IntegrandSpec::exp_sum(5);
    Pcg32 rng(97, 0);
    const std::size_t n = 10000000;
    double sum = 0.0, sum_sq = 0.0;
    std::vector<double> point(5);
    for (std::size_t i = 0; i < n; ++i) {
        rng.fill(point);
        const double v = spec.evaluate(point);
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sum_sq / static_cast<double>(n) - mean * mean;
    const double se = std::sqrt(var / static_cast<double>(n));
    CHECK(std::abs(mean - spec.reference().value) <= 4.0 * se);
}

TEST_CASE("multilight reference is independent of the light count") {
    // Condition on the selected branch, then integrate the 2d bump by
    // Gauss-Legendre; this never uses the claimed closed form.
    const auto oracle = [](int lights) {
        double total = 0.0;
        for (int l = 0; l < lights; ++l) {
            const IntegrandSpec spec = IntegrandSpec::multi_light(lights);
            const double u1 = (static_cast<double>(l) + 0.5) / static_cast<double>(lights);
            total += quadrature::tensor_gauss(
                [&](std::span<const double> vw) {
                    const double u[3] = {u1, vw[0], vw[1]};
                    return spec.evaluate(u);
                },
                2, 64);
        }
        return total / static_cast<double>(lights);
    };
    const double at1 = oracle(1);
    const double at8 = oracle(8);
    const double at64 = oracle(64);
    CHECK(std::abs(at1 - 1.0) <= 1e-9);
    CHECK(std::abs(at8 - at1) <= 1e-6);
    CHECK(std::abs(at64 - at1) <= 1e-6);
    CHECK(IntegrandSpec::multi_light(8).reference().value == 1.0);
}

TEST_CASE("draw_batch is reproducible per stream") {
    const IntegrandSpec spec = IntegrandSpec::sum_sin(3);
    const SampleBatch a = draw_batch(spec, 64, {7, 9});
    const SampleBatch b = draw_batch(spec, 64, {7, 9});
    const SampleBatch c = draw_batch(spec, 64, {7, 10});
    REQUIRE(a.size() == b.size());
    bool same = true;
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        same = same && a.value(i) == b.value(i);
        differs = differs || a.value(i) != c.value(i);
    }
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("mis toy sampler: hand-checked weighted values") {
    Pcg32 rng(101, 0);
    for (int i = 0; i < 200; ++i) {
        const int technique = i % 2;
        const MisSample s = mis_toy_sample(rng, technique);
        const double xi = s.point[0];
        const double x = technique == 0 ? xi : std::sqrt(xi);
        // Balance heuristic collapses both techniques to f / (p0 + p1).
        CHECK(s.weighted_value ==
              doctest::Approx(x * x / (1.0 + 2.0 * x)).epsilon(1e-15));
        CHECK(s.technique == technique);
        // Weights across techniques sum to one at this x.
        const double w0 = 1.0 / (1.0 + 2.0 * x);
        const double w1 = 2.0 * x / (1.0 + 2.0 * x);
        CHECK(w0 + w1 == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK_THROWS_WITH_AS(mis_toy_sample(rng, 2), doctest::Contains("InvalidConfig"), Error);
}

TEST_CASE("mis toy sampler: plain combination converges to one third") {
    Pcg32 rng(103, 0);
    const std::size_t per_technique = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < per_technique; ++i) {
        const double contribution =
            mis_toy_sample(rng, 0).weighted_value + mis_toy_sample(rng, 1).weighted_value;
        sum += contribution;
        sum_sq += contribution * contribution;
    }
    const double mean = sum / static_cast<double>(per_technique);
    const double var = sum_sq / static_cast<double>(per_technique) - mean * mean;
    const double se = std::sqrt(var / static_cast<double>(per_technique));
    CHECK(std::abs(mean - 1.0 / 3.0) <= 3.0 * se);
}

TEST_CASE("integrand registry resolves names") {
    CHECK(integrand_by_name("step").has_value());
    CHECK(integrand_by_name("sumsin", 5)->dim == 5);
    CHECK(integrand_by_name("multilight", 0, 16)->lights == 16);
    CHECK(integrand_by_name("multilight")->dim == 3);
    CHECK(!integrand_by_name("no-such-integrand").has_value());
    CHECK(builtin_integrands().size() == 8);
}
