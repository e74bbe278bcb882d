#include "regmc/integrands.hpp"

#include <cmath>
#include <numbers>

namespace regmc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Golden-ratio offsets keep the per-light bump centers distinct and spread.
constexpr double kGolden = 0.6180339887498949;
constexpr double kGoldenSq = 0.3819660112501051;

constexpr std::array<double, 6> kDefaultPolyCoefficients{0.5, -1.5, 2.0, 1.0, -2.5, 3.0};

double fractional(double x) { return x - std::floor(x); }

void check_dim(const IntegrandSpec& spec, std::span<const double> u) {
    if (static_cast<int>(u.size()) != spec.dim)
        throw Error("DimensionMismatch", "point has dimension " + std::to_string(u.size()) +
                                             ", integrand expects " + std::to_string(spec.dim));
}

// Unit-integral bump for light l: both factors span full cosine periods, so
// the integral over (v, w) is exactly 1 for every center.
double light_bump(int l, double v, double w) {
    const double a = fractional(0.35 + static_cast<double>(l) * kGolden);
    const double b = fractional(0.71 + static_cast<double>(l) * kGoldenSq);
    return (1.0 + std::cos(kTwoPi * (v - a))) * (1.0 + std::cos(kTwoPi * (w - b)));
}

}  // namespace

IntegrandSpec IntegrandSpec::step1d(double threshold, double lo, double hi) {
    IntegrandSpec s;
    s.id = IntegrandId::Step1d;
    s.dim = 1;
    s.threshold = threshold;
    s.lo = lo;
    s.hi = hi;
    return s;
}

IntegrandSpec IntegrandSpec::shifted_gaussian1d(double center, double width) {
    if (!(width > 0.0)) throw Error("InvalidConfig", "gaussian width must be > 0");
    IntegrandSpec s;
    s.id = IntegrandId::ShiftedGaussian1d;
    s.dim = 1;
    s.center = center;
    s.width = width;
    return s;
}

IntegrandSpec IntegrandSpec::high_freq1d(int frequency) {
    if (frequency < 1) throw Error("InvalidConfig", "frequency must be >= 1");
    IntegrandSpec s;
    s.id = IntegrandId::HighFreq1d;
    s.dim = 1;
    s.frequency = frequency;
    return s;
}

IntegrandSpec IntegrandSpec::poly1d() { return poly1d(kDefaultPolyCoefficients); }

IntegrandSpec IntegrandSpec::poly1d(const std::array<double, 6>& coefficients) {
    IntegrandSpec s;
    s.id = IntegrandId::Poly1d;
    s.dim = 1;
    s.coefficients = coefficients;
    return s;
}

IntegrandSpec IntegrandSpec::sum_sin(int dim) {
    if (dim < 1) throw Error("InvalidDimension", "dim must be >= 1");
    IntegrandSpec s;
    s.id = IntegrandId::SumSin;
    s.dim = dim;
    return s;
}

IntegrandSpec IntegrandSpec::exp_sum(int dim) {
    if (dim < 1) throw Error("InvalidDimension", "dim must be >= 1");
    IntegrandSpec s;
    s.id = IntegrandId::ExpSum;
    s.dim = dim;
    return s;
}

IntegrandSpec IntegrandSpec::multi_light(int lights) {
    if (lights < 1) throw Error("InvalidConfig", "lights must be >= 1");
    IntegrandSpec s;
    s.id = IntegrandId::MultiLight;
    s.dim = 3;
    s.lights = lights;
    return s;
}

IntegrandSpec IntegrandSpec::mis_toy() {
    IntegrandSpec s;
    s.id = IntegrandId::MisToy;
    s.dim = 1;
    return s;
}

double IntegrandSpec::evaluate(std::span<const double> u) const {
    check_dim(*this, u);
    switch (id) {
        case IntegrandId::Step1d: return u[0] < threshold ? lo : hi;
        case IntegrandId::ShiftedGaussian1d: {
            const double d = u[0] - center;
            return std::exp(-d * d / (2.0 * width * width));
        }
        case IntegrandId::HighFreq1d:
            return std::sin(kTwoPi * static_cast<double>(frequency) * u[0]) + 1.0;
        case IntegrandId::Poly1d: {
            // Horner on c0 + c1 u + ... + c5 u^5.
            double v = coefficients[5];
            for (int k = 4; k >= 0; --k) v = v * u[0] + coefficients[static_cast<std::size_t>(k)];
            return v;
        }
        case IntegrandId::SumSin: {
            double v = 0.0;
            for (double x : u) v += std::sin(kTwoPi * x);
            return v;
        }
        case IntegrandId::ExpSum: {
            double s = 0.0;
            for (double x : u) s += x;
            return std::exp(s);
        }
        case IntegrandId::MultiLight: {
            // u[0] picks one of `lights` equal-probability branches; the
            // selection factor L cancels the per-light 1/L power share, so
            // each branch contributes its unit-integral bump directly. Branch
            // switches create lights-1 discontinuities along u[0].
            int l = static_cast<int>(u[0] * static_cast<double>(lights));
            if (l >= lights) l = lights - 1;
            return light_bump(l, u[1], u[2]);
        }
        case IntegrandId::MisToy: return u[0] * u[0];
    }
    throw Error("InvalidConfig", "unknown integrand id");
}

Reference IntegrandSpec::reference() const {
    switch (id) {
        case IntegrandId::Step1d: return {lo * threshold + hi * (1.0 - threshold), 0.0};
        case IntegrandId::ShiftedGaussian1d: {
            const double s = width * std::numbers::sqrt2;
            const double v = width * std::sqrt(kPi / 2.0) *
                             (std::erf((1.0 - center) / s) + std::erf(center / s));
            return {v, 1e-14};
        }
        case IntegrandId::HighFreq1d: return {1.0, 1e-14};  // full periods of the sine cancel
        case IntegrandId::Poly1d: {
            double v = 0.0;
            for (int k = 0; k < 6; ++k)
                v += coefficients[static_cast<std::size_t>(k)] / static_cast<double>(k + 1);
            return {v, 0.0};
        }
        case IntegrandId::SumSin: return {0.0, 0.0};
        case IntegrandId::ExpSum: {
            const double v = std::pow(std::numbers::e - 1.0, static_cast<double>(dim));
            return {v, 1e-12 * v};
        }
        case IntegrandId::MultiLight: return {1.0, 1e-12};  // every bump integrates to 1
        case IntegrandId::MisToy: return {1.0 / 3.0, 0.0};
    }
    throw Error("InvalidConfig", "unknown integrand id");
}

std::string IntegrandSpec::name() const {
    switch (id) {
        case IntegrandId::Step1d: return "step";
        case IntegrandId::ShiftedGaussian1d: return "gaussian";
        case IntegrandId::HighFreq1d: return "highfreq";
        case IntegrandId::Poly1d: return "poly";
        case IntegrandId::SumSin: return "sumsin";
        case IntegrandId::ExpSum: return "expsum";
        case IntegrandId::MultiLight: return "multilight" + std::to_string(lights);
        case IntegrandId::MisToy: return "mistoy";
    }
    return "unknown";
}

SampleBatch draw_batch(const IntegrandSpec& spec, std::size_t n, RngConfig rng) {
    Pcg32 gen(rng);
    SampleBatch batch(spec.dim);
    batch.reserve(n);
    std::vector<double> point(static_cast<std::size_t>(spec.dim));
    for (std::size_t i = 0; i < n; ++i) {
        gen.fill(point);
        batch.add(point, spec.evaluate(point));
    }
    return batch;
}

std::vector<IntegrandSpec> builtin_integrands() {
    return {
        IntegrandSpec::step1d(),         IntegrandSpec::shifted_gaussian1d(),
        IntegrandSpec::high_freq1d(),    IntegrandSpec::poly1d(),
        IntegrandSpec::sum_sin(5),       IntegrandSpec::exp_sum(5),
        IntegrandSpec::multi_light(8),   IntegrandSpec::mis_toy(),
    };
}

std::optional<IntegrandSpec> integrand_by_name(std::string_view name, int dim, int lights) {
    const int d = dim > 0 ? dim : 1;
    if (name == "step") return IntegrandSpec::step1d();
    if (name == "gaussian") return IntegrandSpec::shifted_gaussian1d();
    if (name == "highfreq") return IntegrandSpec::high_freq1d();
    if (name == "poly") return IntegrandSpec::poly1d();
    if (name == "sumsin") return IntegrandSpec::sum_sin(d);
    if (name == "expsum") return IntegrandSpec::exp_sum(d);
    if (name == "multilight") return IntegrandSpec::multi_light(lights);
    if (name == "mistoy") return IntegrandSpec::mis_toy();
    return std::nullopt;
}

MisSample mis_toy_sample(Pcg32& rng, int technique) {
    if (technique != 0 && technique != 1)
        throw Error("InvalidConfig", "technique must be 0 or 1");
    const double xi = rng.next_double();
    const double x = technique == 0 ? xi : std::sqrt(xi);
    const double p0 = 1.0;
    const double p1 = 2.0 * x;
    const double f = x * x;
    // Balance heuristic: w_t f / p_t = f / (p0 + p1), which also stays finite
    // when the technique's own density vanishes at x = 0.
    return {{xi}, f / (p0 + p1), technique};
}

}  // namespace regmc
