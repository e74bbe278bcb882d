#pragma once

#include <functional>
#include <span>
#include <vector>

namespace regmc::quadrature {

// Composite Simpson rule on [0,1]. Suitable for smooth integrands.
double simpson(const std::function<double(double)>& f, long panels = 1000000);

// Composite midpoint rule on [0,1]. Panel midpoints never touch panel edges,
// so if panels is a multiple of an integrand's breakpoint grid this is exact
// for piecewise-constant functions.
double midpoint(const std::function<double(double)>& f, long panels = 1000000);

// Gauss-Legendre nodes and weights mapped to [0,1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Tensor-product Gauss-Legendre over [0,1]^dim. Cost grows as n^dim; meant
// for dim <= 3.
double tensor_gauss(const std::function<double(std::span<const double>)>& f, int dim,
                    int nodes_per_axis = 64);

// Tensor-product midpoint rule over [0,1]^dim, for discontinuous integrands
// whose breakpoints align with the panel grid.
double tensor_midpoint(const std::function<double(std::span<const double>)>& f, int dim,
                       long panels_per_axis);

}  // namespace regmc::quadrature
