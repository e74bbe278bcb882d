#include "regmc/basis.hpp"

#include <cmath>
#include <numbers>

namespace regmc {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int dim) {
    if (dim < 1) throw Error("InvalidDimension", "basis dimension must be >= 1");
}

void check_count(std::size_t count) {
    if (count > BasisSet::kMaxFunctions)
        throw Error("BasisTooLarge", "basis would have " + std::to_string(count) +
                                         " functions (limit " +
                                         std::to_string(BasisSet::kMaxFunctions) + ")");
}

// K^dim, capped so the guard can fire without overflowing.
std::size_t grid_count(int dim, int k) {
    std::size_t n = 1;
    for (int i = 0; i < dim; ++i) {
        if (n > BasisSet::kMaxFunctions) return BasisSet::kMaxFunctions + 1;
        n *= static_cast<std::size_t>(k);
    }
    return n;
}

// All exponent tuples of total degree `degree`, leading axis decreasing.
void enumerate_degree(int dim, int degree, std::vector<int>& prefix, std::vector<int>& out) {
    if (static_cast<int>(prefix.size()) == dim - 1) {
        out.insert(out.end(), prefix.begin(), prefix.end());
        out.push_back(degree);
        return;
    }
    for (int a = degree; a >= 0; --a) {
        prefix.push_back(a);
        enumerate_degree(dim, degree - a, prefix, out);
        prefix.pop_back();
    }
}

int cell_coordinate(double u, int k) {
    int c = static_cast<int>(u * static_cast<double>(k));
    return c >= k ? k - 1 : c;  // u == 1 belongs to the top cell
}

}  // namespace

std::string_view basis_kind_name(BasisKind k) {
    switch (k) {
        case BasisKind::Polynomial: return "poly";
        case BasisKind::Step: return "step";
        case BasisKind::GaussianMixture: return "gaussian";
        case BasisKind::Sine: return "sine";
    }
    return "unknown";
}

double monomial_integral(std::span<const int> exponents) {
    double v = 1.0;
    for (int a : exponents) v *= 1.0 / (static_cast<double>(a) + 1.0);
    return v;
}

std::size_t polynomial_count(int dim, int order) {
    // C(dim + order, order) via the multiplicative formula.
    std::size_t n = 1;
    for (int i = 1; i <= order; ++i) {
        n = n * static_cast<std::size_t>(dim + i) / static_cast<std::size_t>(i);
        if (n > BasisSet::kMaxFunctions) return BasisSet::kMaxFunctions + 1;
    }
    return n;
}

std::shared_ptr<const BasisSet> BasisSet::polynomial(int dim, int order) {
    check_dim(dim);
    if (order < 0) throw Error("InvalidConfig", "polynomial order must be >= 0");
    const std::size_t count = polynomial_count(dim, order);
    check_count(count);

    auto basis = std::shared_ptr<BasisSet>(new BasisSet());
    basis->kind_ = BasisKind::Polynomial;
    basis->dim_ = dim;
    basis->parameter_ = order;
    basis->exponents_.reserve(count * static_cast<std::size_t>(dim));
    std::vector<int> prefix;
    for (int degree = 0; degree <= order; ++degree)
        enumerate_degree(dim, degree, prefix, basis->exponents_);

    basis->integrals_.resize(static_cast<Eigen::Index>(count));
    for (std::size_t q = 0; q < count; ++q)
        basis->integrals_[static_cast<Eigen::Index>(q)] = monomial_integral(basis->exponents(q));
    return basis;
}

std::shared_ptr<const BasisSet> BasisSet::step(int dim, int cells_per_axis) {
    check_dim(dim);
    if (cells_per_axis < 1) throw Error("InvalidConfig", "cells_per_axis must be >= 1");
    const std::size_t cells = grid_count(dim, cells_per_axis);
    check_count(cells);

    auto basis = std::shared_ptr<BasisSet>(new BasisSet());
    basis->kind_ = BasisKind::Step;
    basis->dim_ = dim;
    basis->parameter_ = cells_per_axis;
    basis->integrals_.resize(static_cast<Eigen::Index>(cells));
    basis->integrals_[0] = 1.0;
    const double cell_volume = 1.0 / static_cast<double>(cells);
    for (std::size_t q = 1; q < cells; ++q)
        basis->integrals_[static_cast<Eigen::Index>(q)] = cell_volume;
    return basis;
}

std::shared_ptr<const BasisSet> BasisSet::gaussian(int dim, int centers_per_axis, double width) {
    check_dim(dim);
    if (centers_per_axis < 1) throw Error("InvalidConfig", "centers_per_axis must be >= 1");
    if (!(width > 0.0)) throw Error("InvalidConfig", "gaussian width must be > 0");
    const std::size_t centers = grid_count(dim, centers_per_axis);
    check_count(centers + 1);

    auto basis = std::shared_ptr<BasisSet>(new BasisSet());
    basis->kind_ = BasisKind::GaussianMixture;
    basis->dim_ = dim;
    basis->parameter_ = centers_per_axis;
    basis->width_ = width;
    basis->centers_.reserve(centers * static_cast<std::size_t>(dim));

    // Row-major odometer over the tensor grid of cell midpoints.
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    for (std::size_t m = 0; m < centers; ++m) {
        for (int k = 0; k < dim; ++k)
            basis->centers_.push_back((static_cast<double>(idx[static_cast<std::size_t>(k)]) + 0.5) /
                                      static_cast<double>(centers_per_axis));
        for (int k = dim - 1; k >= 0; --k) {
            if (++idx[static_cast<std::size_t>(k)] < centers_per_axis) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
    }

    basis->integrals_.resize(static_cast<Eigen::Index>(centers + 1));
    basis->integrals_[0] = 1.0;
    const double s = width * std::numbers::sqrt2;
    for (std::size_t m = 0; m < centers; ++m) {
        double v = 1.0;
        for (int k = 0; k < dim; ++k) {
            const double c = basis->centers_[m * static_cast<std::size_t>(dim) +
                                             static_cast<std::size_t>(k)];
            v *= width * std::sqrt(kPi / 2.0) * (std::erf((1.0 - c) / s) + std::erf(c / s));
        }
        basis->integrals_[static_cast<Eigen::Index>(m + 1)] = v;
    }
    return basis;
}

std::shared_ptr<const BasisSet> BasisSet::sine(int dim, int max_freq) {
    check_dim(dim);
    if (max_freq < 1) throw Error("InvalidConfig", "max_freq must be >= 1");
    const std::size_t count = 1 + 2 * static_cast<std::size_t>(dim) * static_cast<std::size_t>(max_freq);
    check_count(count);

    auto basis = std::shared_ptr<BasisSet>(new BasisSet());
    basis->kind_ = BasisKind::Sine;
    basis->dim_ = dim;
    basis->parameter_ = max_freq;
    basis->integrals_.resize(static_cast<Eigen::Index>(count));
    basis->integrals_[0] = 1.0;
    Eigen::Index q = 1;
    for (int axis = 0; axis < dim; ++axis) {
        for (int k = 1; k <= max_freq; ++k) {
            basis->sine_terms_.push_back({axis, k, true});
            basis->integrals_[q++] = (k % 2 == 0) ? 0.0 : 2.0 / (static_cast<double>(k) * kPi);
            basis->sine_terms_.push_back({axis, k, false});
            basis->integrals_[q++] = 0.0;  // cos(k pi u) integrates to 0 for k >= 1
        }
    }
    return basis;
}

std::span<const int> BasisSet::exponents(std::size_t q) const {
    if (kind_ != BasisKind::Polynomial)
        throw Error("InvalidConfig", "exponents() only applies to polynomial bases");
    return {exponents_.data() + q * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
}

void BasisSet::evaluate(std::span<const double> u, Eigen::VectorXd& out) const {
    if (static_cast<int>(u.size()) != dim_)
        throw Error("DimensionMismatch", "point has dimension " + std::to_string(u.size()) +
                                             ", basis expects " + std::to_string(dim_));
    const Eigen::Index m = integrals_.size();
    out.resize(m);
    out[0] = 1.0;

    switch (kind_) {
        case BasisKind::Polynomial: {
            // Per-axis power table, then one product per monomial.
            thread_local std::vector<double> powers;
            const int order = parameter_;
            powers.resize(static_cast<std::size_t>(dim_) * static_cast<std::size_t>(order + 1));
            for (int k = 0; k < dim_; ++k) {
                double* row = powers.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(order + 1);
                row[0] = 1.0;
                for (int a = 1; a <= order; ++a) row[a] = row[a - 1] * u[static_cast<std::size_t>(k)];
            }
            const int* e = exponents_.data() + dim_;  // skip the constant
            for (Eigen::Index q = 1; q < m; ++q) {
                double v = 1.0;
                for (int k = 0; k < dim_; ++k)
                    v *= powers[static_cast<std::size_t>(k) * static_cast<std::size_t>(order + 1) +
                                static_cast<std::size_t>(e[k])];
                out[q] = v;
                e += dim_;
            }
            break;
        }
        case BasisKind::Step: {
            out.tail(m - 1).setZero();
            const int k = parameter_;
            std::size_t cell = 0;
            for (int a = 0; a < dim_; ++a)
                cell = cell * static_cast<std::size_t>(k) +
                       static_cast<std::size_t>(cell_coordinate(u[static_cast<std::size_t>(a)], k));
            // The last cell was dropped; every other cell maps to function 1 + id.
            if (cell + 1 < static_cast<std::size_t>(m)) out[static_cast<Eigen::Index>(cell + 1)] = 1.0;
            break;
        }
        case BasisKind::GaussianMixture: {
            const double inv = 1.0 / (2.0 * width_ * width_);
            for (Eigen::Index q = 1; q < m; ++q) {
                const double* c = centers_.data() + static_cast<std::size_t>(q - 1) * static_cast<std::size_t>(dim_);
                double d2 = 0.0;
                for (int k = 0; k < dim_; ++k) {
                    const double d = u[static_cast<std::size_t>(k)] - c[k];
                    d2 += d * d;
                }
                out[q] = std::exp(-d2 * inv);
            }
            break;
        }
        case BasisKind::Sine: {
            for (Eigen::Index q = 1; q < m; ++q) {
                const SineTerm& t = sine_terms_[static_cast<std::size_t>(q - 1)];
                const double phase = static_cast<double>(t.freq) * kPi * u[static_cast<std::size_t>(t.axis)];
                out[q] = t.is_sin ? std::sin(phase) : std::cos(phase);
            }
            break;
        }
    }
}

Eigen::VectorXd BasisSet::evaluate(std::span<const double> u) const {
    Eigen::VectorXd out;
    evaluate(u, out);
    return out;
}

}  // namespace regmc
