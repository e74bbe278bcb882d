#pragma once

#include <Eigen/Core>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "regmc/core.hpp"

namespace regmc {

enum class BasisKind { Polynomial, Step, GaussianMixture, Sine };

std::string_view basis_kind_name(BasisKind k);

// A family of M+1 basis functions over [0,1]^D with exact analytic integrals.
// Index 0 is always the constant function 1 with integral exactly 1; that is
// what lets the fitted estimator fall back to the plain sample mean.
//
// Function ordering is fixed so coefficient vectors are comparable across runs:
//   Polynomial{O}: all monomials u^a with total degree |a| <= O, graded
//     lexicographic, constant first; within one degree the leading-axis
//     exponent decreases. Count is C(D+O, O).
//   Step{K}: the K^D axis-aligned uniform cells in row-major order (last axis
//     fastest), with the final cell dropped so the design stays full rank
//     next to the constant. Each indicator integrates to K^-D.
//   GaussianMixture{K, w}: exp(-|u-c|^2 / (2 w^2)) on the K^D tensor grid of
//     cell midpoints, row-major.
//   Sine{K}: per axis j, sin(k pi u_j) and cos(k pi u_j) for k = 1..K,
//     axis-major, sin before cos. No cross terms.
class BasisSet {
public:
    static constexpr std::size_t kMaxFunctions = 100000;

    static std::shared_ptr<const BasisSet> polynomial(int dim, int order);
    static std::shared_ptr<const BasisSet> step(int dim, int cells_per_axis);
    static std::shared_ptr<const BasisSet> gaussian(int dim, int centers_per_axis, double width);
    static std::shared_ptr<const BasisSet> sine(int dim, int max_freq);

    BasisKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return dim_; }
    // Family parameter: polynomial order, cells/centers per axis, or max frequency.
    int parameter() const noexcept { return parameter_; }
    double width() const noexcept { return width_; }

    std::size_t count() const noexcept { return static_cast<std::size_t>(integrals_.size()); }
    bool constant_only() const noexcept { return integrals_.size() == 1; }

    const Eigen::VectorXd& integrals() const noexcept { return integrals_; }
    double integral(std::size_t q) const { return integrals_[static_cast<Eigen::Index>(q)]; }

    // Writes P_q(u) for q = 0..M into out; out[0] is exactly 1.
    void evaluate(std::span<const double> u, Eigen::VectorXd& out) const;
    Eigen::VectorXd evaluate(std::span<const double> u) const;

    // Exponent tuple of monomial q (Polynomial kind only).
    std::span<const int> exponents(std::size_t q) const;

private:
    BasisSet() = default;

    BasisKind kind_ = BasisKind::Polynomial;
    int dim_ = 1;
    int parameter_ = 0;
    double width_ = 0.0;

    Eigen::VectorXd integrals_;
    std::vector<int> exponents_;   // Polynomial: count x dim
    std::vector<double> centers_;  // GaussianMixture: (count-1) x dim
    struct SineTerm {
        int axis;
        int freq;
        bool is_sin;
    };
    std::vector<SineTerm> sine_terms_;  // Sine: count-1 entries
};

// Integral of the monomial u^a over the unit cube: product of 1/(a_k + 1).
double monomial_integral(std::span<const int> exponents);

// C(dim + order, order) with an overflow-safe cap at BasisSet::kMaxFunctions + 1.
std::size_t polynomial_count(int dim, int order);

}  // namespace regmc
