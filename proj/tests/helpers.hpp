#ifndef DARBOUX_TEST_HELPERS_HPP
#define DARBOUX_TEST_HELPERS_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "darboux/grid.hpp"

namespace dbxtest {

using Fn2 = std::function<double(double, double)>;

// Independent derivative oracle: central differences with one Richardson step.
// Deliberately avoids the expression-DAG derivative path.
inline double fd_deriv1(const Fn2& f, int dir, double x, double y, double h) {
    if (dir == 0) return (f(x + h, y) - f(x - h, y)) / (2 * h);
    return (f(x, y + h) - f(x, y - h)) / (2 * h);
}

inline double fd_deriv(const Fn2& f, int ix, int iy, double x, double y, double h = 1e-3) {
    if (ix > 0) {
        Fn2 g = [=](double a, double b) { return fd_deriv1(f, 0, a, b, h); };
        return fd_deriv(g, ix - 1, iy, x, y, h);
    }
    if (iy > 0) {
        Fn2 g = [=](double a, double b) { return fd_deriv1(f, 1, a, b, h); };
        return fd_deriv(g, ix, iy - 1, x, y, h);
    }
    return f(x, y);
}

// Richardson-extrapolated first/second derivatives for tighter tolerances.
inline double rich_deriv(const Fn2& f, int ix, int iy, double x, double y, double h = 1e-2) {
    double d1 = fd_deriv(f, ix, iy, x, y, h);
    double d2 = fd_deriv(f, ix, iy, x, y, h / 2);
    return (4 * d2 - d1) / 3;
}

inline std::vector<darboux::Point2> sample_points(double x0, double x1, double y0, double y1,
                                                  int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
    std::vector<darboux::Point2> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) pts.push_back({ux(rng), uy(rng)});
    return pts;
}

// Random smooth trigonometric-polynomial grid field, zero outside nothing.
inline darboux::GridFn random_trig_field(const darboux::Grid2& g, int max_mode, unsigned seed,
                                         double amp = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    double Lx = g.dx * (g.nx - 1), Ly = g.dy * (g.ny - 1);
    darboux::GridFn f(g);
    for (int kx = 0; kx <= max_mode; ++kx)
        for (int ky = 0; ky <= max_mode; ++ky) {
            double a = uc(rng), b = uc(rng);
            for (int i = 0; i < g.nx; ++i)
                for (int j = 0; j < g.ny; ++j) {
                    double px = 2 * M_PI * kx * (g.x(i) - g.x0) / Lx;
                    double py = 2 * M_PI * ky * (g.y(j) - g.y0) / Ly;
                    f.at(i, j) += amp * (a * std::cos(px + py) + b * std::sin(px - py)) /
                                  (1.0 + kx * kx + ky * ky);
                }
        }
    return f;
}

} // namespace dbxtest

#endif
