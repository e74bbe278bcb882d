#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace regmc {

// Error with a stable machine-readable code ("EmptyBatch", "BasisTooLarge", ...)
// next to the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Identifies one reproducible random sequence. Equal (seed, stream) pairs
// produce bit-identical sequences; distinct streams are independent, so the
// replication harness uses one stream per replication.
struct RngConfig {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// pcg32 (XSH-RR 64/32, O'Neill 2014): 64-bit state, 2^63 selectable streams.
class Pcg32 {
public:
    explicit Pcg32(RngConfig cfg) : Pcg32(cfg.seed, cfg.stream) {}

    Pcg32(std::uint64_t seed, std::uint64_t stream) {
        state_ = 0u;
        inc_ = (stream << 1u) | 1u;
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        std::uint64_t hi = next_u32() >> 5;  // 27 bits
        std::uint64_t lo = next_u32() >> 6;  // 26 bits
        return (static_cast<double>(hi) * 67108864.0 + static_cast<double>(lo)) *
               (1.0 / 9007199254740992.0);
    }

    void fill(std::span<double> out) {
        for (double& v : out) v = next_double();
    }

    // Unbiased integer in [0, bound) via rejection; bound must be positive.
    std::uint32_t next_below(std::uint32_t bound) {
        std::uint32_t threshold = (0u - bound) % bound;
        for (;;) {
            std::uint32_t r = next_u32();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 1;
};

// A batch of points in the unit hypercube [0,1]^D together with the integrand
// value observed at each point. Coordinates are stored row-major.
class SampleBatch {
public:
    explicit SampleBatch(int dim) : dim_(dim) {
        if (dim < 1) throw Error("InvalidDimension", "batch dimension must be >= 1");
    }

    void reserve(std::size_t n) {
        coords_.reserve(n * static_cast<std::size_t>(dim_));
        values_.reserve(n);
    }

    void add(std::span<const double> point, double value);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }
    double value(std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }

    // Index range [begin, end) as a standalone batch.
    SampleBatch slice(std::size_t begin, std::size_t end) const;

private:
    int dim_;
    std::vector<double> coords_;
    std::vector<double> values_;
};

enum class Solver { PlainMc, DirectMatrix, Sgd, Incremental };

std::string_view solver_name(Solver s);

// Output of every estimator. `estimate` is always stored as
// model_integral + difference_mean so the decomposition is exact.
struct EstimateReport {
    double estimate = 0.0;
    double model_integral = 0.0;   // G, the analytic integral of the fitted model
    double difference_mean = 0.0;  // mean of f(u_i) - g(u_i)
    std::int64_t n_samples = 0;
    double residual_estimate = 0.0;  // mean squared misfit on the batch
    Solver solver = Solver::PlainMc;
};

// Arithmetic mean of the batch values, reported with model_integral = 0 so
// downstream tooling treats all solvers uniformly. residual_estimate is the
// mean squared deviation about the batch mean.
EstimateReport mc_estimate(const SampleBatch& batch);

// (1/R) sum (estimate_r - reference)^2
double mse(std::span<const double> estimates, double reference);

// (1/R) sum (estimate_r - reference)^2 / (reference^2 + 0.01)
double rel_mse(std::span<const double> estimates, double reference);

}  // namespace regmc
