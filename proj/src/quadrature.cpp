#include "regmc/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace regmc::quadrature {

double simpson(const std::function<double(double)>& f, long panels) {
    if (panels < 1) throw std::invalid_argument("panels must be >= 1");
    const double h = 1.0 / static_cast<double>(panels);
    double sum = 0.0;
    for (long i = 0; i < panels; ++i) {
        const double a = static_cast<double>(i) * h;
        const double b = a + h;
        sum += (h / 6.0) * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
    }
    return sum;
}

double midpoint(const std::function<double(double)>& f, long panels) {
    if (panels < 1) throw std::invalid_argument("panels must be >= 1");
    const double h = 1.0 / static_cast<double>(panels);
    double sum = 0.0;
    for (long i = 0; i < panels; ++i) sum += f((static_cast<double>(i) + 0.5) * h);
    return sum * h;
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration on the Legendre polynomial from the Chebyshev guess.
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - static_cast<double>(j) * p2) /
                     (static_cast<double>(j) + 1.0);
            }
            pp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
        nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + z);
        weights[static_cast<std::size_t>(i)] = 0.5 * w;
        weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
    }
}

double tensor_gauss(const std::function<double(std::span<const double>)>& f, int dim,
                    int nodes_per_axis) {
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    std::vector<double> nodes, weights;
    gauss_legendre_01(nodes_per_axis, nodes, weights);

    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    std::vector<double> point(static_cast<std::size_t>(dim));
    double sum = 0.0;
    for (;;) {
        double w = 1.0;
        for (int k = 0; k < dim; ++k) {
            const auto i = static_cast<std::size_t>(idx[static_cast<std::size_t>(k)]);
            point[static_cast<std::size_t>(k)] = nodes[i];
            w *= weights[i];
        }
        sum += w * f(point);
        int k = dim - 1;
        for (; k >= 0; --k) {
            if (++idx[static_cast<std::size_t>(k)] < nodes_per_axis) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
        if (k < 0) break;
    }
    return sum;
}

double tensor_midpoint(const std::function<double(std::span<const double>)>& f, int dim,
                       long panels_per_axis) {
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    if (panels_per_axis < 1) throw std::invalid_argument("panels_per_axis must be >= 1");
    const double h = 1.0 / static_cast<double>(panels_per_axis);
    std::vector<long> idx(static_cast<std::size_t>(dim), 0);
    std::vector<double> point(static_cast<std::size_t>(dim));
    double sum = 0.0;
    for (;;) {
        for (int k = 0; k < dim; ++k)
            point[static_cast<std::size_t>(k)] =
                (static_cast<double>(idx[static_cast<std::size_t>(k)]) + 0.5) * h;
        sum += f(point);
        int k = dim - 1;
        for (; k >= 0; --k) {
            if (++idx[static_cast<std::size_t>(k)] < panels_per_axis) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
        if (k < 0) break;
    }
    return sum * std::pow(h, dim);
}

}  // namespace regmc::quadrature
