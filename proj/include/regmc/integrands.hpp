#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regmc/core.hpp"
#include "regmc/estimator.hpp"

namespace regmc {

enum class IntegrandId {
    Step1d,
    ShiftedGaussian1d,
    HighFreq1d,
    Poly1d,
    SumSin,
    ExpSum,
    MultiLight,
    MisToy,
};

struct Reference {
    double value = 0.0;
    double tolerance = 0.0;  // absolute
};

// Analytic test integrands over [0,1]^D with known reference integrals.
struct IntegrandSpec {
    IntegrandId id = IntegrandId::SumSin;
    int dim = 1;

    double threshold = 0.5, lo = 0.0, hi = 1.0;  // Step1d
    double center = 0.6, width = 0.1;            // ShiftedGaussian1d
    int frequency = 10;                          // HighFreq1d: sin(2 pi k u) + 1
    std::array<double, 6> coefficients{};        // Poly1d, degree 5
    int lights = 1;                              // MultiLight

    static IntegrandSpec step1d(double threshold = 0.5, double lo = 0.0, double hi = 1.0);
    static IntegrandSpec shifted_gaussian1d(double center = 0.6, double width = 0.1);
    static IntegrandSpec high_freq1d(int frequency = 10);
    static IntegrandSpec poly1d();  // default coefficient set
    static IntegrandSpec poly1d(const std::array<double, 6>& coefficients);
    static IntegrandSpec sum_sin(int dim);
    static IntegrandSpec exp_sum(int dim);
    static IntegrandSpec multi_light(int lights);
    static IntegrandSpec mis_toy();

    double evaluate(std::span<const double> u) const;
    Reference reference() const;
    std::string name() const;
};

// Draws n uniform points from the given stream and evaluates the integrand.
SampleBatch draw_batch(const IntegrandSpec& spec, std::size_t n, RngConfig rng);

// The benchmark set used by the dominance and validation suites.
std::vector<IntegrandSpec> builtin_integrands();

// CLI name lookup. dim applies to sumsin/expsum (0 keeps the default of 1);
// lights applies to multilight.
std::optional<IntegrandSpec> integrand_by_name(std::string_view name, int dim = 0,
                                               int lights = 8);

// One weighted sample of the two-technique toy problem f(x) = x^2 on [0,1]:
// technique 0 samples uniformly, technique 1 samples pdf 2x by inversion, and
// the contribution carries the balance-heuristic weight w_t = p_t / (p_0 + p_1).
MisSample mis_toy_sample(Pcg32& rng, int technique);

}  // namespace regmc
