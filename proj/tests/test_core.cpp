#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "regmc/core.hpp"
#include "support/oracles.hpp"

using namespace regmc;

namespace {

SampleBatch batch_1d(std::initializer_list<double> values) {
    SampleBatch batch(1);
    double u = 0.1;
    for (double v : values) {
        const double point[1] = {u};
        batch.add(point, v);
        u = std::fmod(u + 0.37, 1.0);
    }
    return batch;
}

}  // namespace

TEST_CASE("pcg streams are reproducible and independent") {
    Pcg32 a(42, 7);
    Pcg32 b(42, 7);
    Pcg32 c(42, 8);
    bool same = true;
    bool differs = false;
    for (int i = 0; i < 4096; ++i) {
        const double va = a.next_double();
        same = same && va == b.next_double();
        differs = differs || va != c.next_double();
    }
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("pcg doubles stay in the unit interval") {
    Pcg32 rng(1, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.next_double();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("mc_estimate of constant values is the constant") {
    const EstimateReport report = mc_estimate(batch_1d({1, 1, 1, 1}));
    CHECK(report.estimate == 1.0);
    CHECK(report.model_integral == 0.0);
    CHECK(report.difference_mean == 1.0);
    CHECK(report.residual_estimate == 0.0);
    CHECK(report.solver == Solver::PlainMc);
    CHECK(report.n_samples == 4);
}

TEST_CASE("mc_estimate is the arithmetic mean") {
    CHECK(mc_estimate(batch_1d({0, 1})).estimate == 0.5);
}

TEST_CASE("mc_estimate rejects an empty batch") {
    SampleBatch empty(1);
    CHECK_THROWS_WITH_AS(mc_estimate(empty), doctest::Contains("EmptyBatch"), Error);
}

TEST_CASE("mc_estimate of exp over a large batch hits the closed form") {
    Pcg32 rng(123, 0);
    SampleBatch batch(1);
    batch.reserve(1000000);
    for (int i = 0; i < 1000000; ++i) {
        const double point[1] = {rng.next_double()};
        batch.add(point, std::exp(point[0]));
    }
    const EstimateReport report = mc_estimate(batch);
    const double sigma = std::sqrt(report.residual_estimate / static_cast<double>(batch.size()));
    CHECK(std::abs(report.estimate - (std::numbers::e - 1.0)) <= 3.0 * sigma);
}

TEST_CASE("mc_estimate is permutation invariant up to roundoff") {
    Pcg32 rng(5, 1);
    SampleBatch batch(1);
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 257; ++i) {
        const double u = rng.next_double();
        const double f = std::sin(7.0 * u) + 0.25 * u;
        samples.push_back({u, f});
        const double point[1] = {u};
        batch.add(point, f);
    }
    std::reverse(samples.begin(), samples.end());
    SampleBatch reversed(1);
    for (const auto& [u, f] : samples) {
        const double point[1] = {u};
        reversed.add(point, f);
    }
    CHECK(testing::rel_diff(mc_estimate(batch).estimate, mc_estimate(reversed).estimate) < 1e-14);
}

TEST_CASE("replicated means concentrate on the true integral") {
    // 10^4 replications of a small-N mean; the replication average must sit
    // within 4 sample standard deviations / sqrt(R) of the closed form.
    const int reps = 10000;
    const int n = 16;
    std::vector<double> estimates(reps);
    for (int r = 0; r < reps; ++r) {
        Pcg32 rng(77, static_cast<std::uint64_t>(r));
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += std::exp(rng.next_double());
        estimates[static_cast<std::size_t>(r)] = sum / n;
    }
    const auto s = testing::summarize(estimates);
    CHECK(std::abs(s.mean - (std::numbers::e - 1.0)) <= 4.0 * s.std_error);
}

TEST_CASE("mse examples") {
    const double exact[] = {2, 2, 2};
    CHECK(mse(exact, 2.0) == 0.0);
    const double split[] = {1, 3};
    CHECK(mse(split, 2.0) == 1.0);
    const double third[] = {0.4, 0.6, 0.5};
    CHECK(mse(third, 0.5) == doctest::Approx(0.02 / 3.0).epsilon(1e-12));
}

TEST_CASE("rel_mse examples") {
    const double exact[] = {2, 2};
    CHECK(rel_mse(exact, 2.0) == 0.0);
    const double at_zero[] = {1.0};
    CHECK(rel_mse(at_zero, 0.0) == doctest::Approx(100.0).epsilon(1e-12));
    const double near[] = {0.6};
    CHECK(rel_mse(near, 0.5) == doctest::Approx(0.01 / 0.26).epsilon(1e-12));
}

TEST_CASE("error metrics are nonnegative and vanish only at the reference") {
    Pcg32 rng(9, 3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> estimates(1 + rng.next_below(8));
        const double reference = 2.0 * rng.next_double() - 1.0;
        bool all_equal = true;
        for (double& e : estimates) {
            e = reference + (rng.next_below(2) ? 0.0 : rng.next_double() - 0.5);
            all_equal = all_equal && e == reference;
        }
        const double m = mse(estimates, reference);
        const double rm = rel_mse(estimates, reference);
        CHECK(m >= 0.0);
        CHECK(rm >= 0.0);
        CHECK((m == 0.0) == all_equal);
        CHECK((rm == 0.0) == all_equal);
    }
}

TEST_CASE("metrics reject empty input and nonfinite references") {
    CHECK_THROWS_AS(mse({}, 1.0), Error);
    CHECK_THROWS_AS(rel_mse({}, 1.0), Error);
    const double one[] = {1.0};
    CHECK_THROWS_AS(mse(one, std::nan("")), Error);
}

TEST_CASE("sample batch enforces its invariants") {
    SampleBatch batch(2);
    const double ok[] = {0.5, 0.25};
    batch.add(ok, 1.0);
    CHECK(batch.size() == 1);
    CHECK(batch.point(0)[1] == 0.25);

    const double wrong_dim[] = {0.5};
    CHECK_THROWS_WITH_AS(batch.add(wrong_dim, 1.0), doctest::Contains("DimensionMismatch"), Error);
    const double out_of_range[] = {0.5, 1.5};
    CHECK_THROWS_WITH_AS(batch.add(out_of_range, 1.0), doctest::Contains("PointOutOfRange"), Error);
    CHECK_THROWS_WITH_AS(batch.add(ok, std::nan("")), doctest::Contains("NonFiniteSample"), Error);
    CHECK(batch.size() == 1);
}
