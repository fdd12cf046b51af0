#ifndef DARBOUX_GRID_HPP
#define DARBOUX_GRID_HPP

// Structured grids, grid functions, finite-difference stencils, quadrature.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "darboux/errors.hpp"
#include "darboux/field.hpp"

namespace darboux {

struct Grid2 {
    std::string frame = "xy";
    double x0 = 0, y0 = 0;
    double dx = 1, dy = 1;
    int nx = 2, ny = 2; // point counts

    double x(int i) const { return x0 + i * dx; }
    double y(int j) const { return y0 + j * dy; }
    Point2 pt(int i, int j) const { return {x(i), y(j)}; }
    int size() const { return nx * ny; }
    int index(int i, int j) const { return i * ny + j; }
    double xmax() const { return x(nx - 1); }
    double ymax() const { return y(ny - 1); }

    bool same_layout(const Grid2& o) const {
        return nx == o.nx && ny == o.ny && std::abs(dx - o.dx) < 1e-14 &&
               std::abs(dy - o.dy) < 1e-14 && std::abs(x0 - o.x0) < 1e-12 &&
               std::abs(y0 - o.y0) < 1e-12;
    }
};

class GridFn {
public:
    Grid2 grid;
    std::vector<double> v;
    std::map<std::string, std::string> boundary_flags; // edge -> condition tag

    GridFn() = default;
    explicit GridFn(const Grid2& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}
    GridFn(const Grid2& g, const std::function<double(double, double)>& f) : grid(g), v(g.size()) {
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) v[g.index(i, j)] = f(g.x(i), g.y(j));
    }
    GridFn(const Grid2& g, const AnalyticField& f) : grid(g), v(g.size()) {
        std::vector<Point2> pts(g.size());
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) pts[g.index(i, j)] = g.pt(i, j);
        v = f.eval_many(pts);
    }

    double at(int i, int j) const { return v[grid.index(i, j)]; }
    double& at(int i, int j) { return v[grid.index(i, j)]; }

    GridFn& operator+=(const GridFn& o) {
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += o.v[k];
        return *this;
    }
    GridFn& operator-=(const GridFn& o) {
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= o.v[k];
        return *this;
    }
    GridFn& operator*=(double s) {
        for (auto& x : v) x *= s;
        return *this;
    }
    friend GridFn operator+(GridFn a, const GridFn& b) { return a += b; }
    friend GridFn operator-(GridFn a, const GridFn& b) { return a -= b; }
    friend GridFn operator*(double s, GridFn a) { return a *= s; }
    friend GridFn operator*(GridFn a, const GridFn& b) {
        for (std::size_t k = 0; k < a.v.size(); ++k) a.v[k] *= b.v[k];
        return a;
    }

    double max_abs() const {
        double m = 0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    bool all_finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

namespace fd {

// First derivatives: 2nd-order centered, 2nd-order one-sided at edges.
inline GridFn dx(const GridFn& u) {
    GridFn r(u.grid);
    const double h = u.grid.dx;
    const int nx = u.grid.nx, ny = u.grid.ny;
    if (nx < 3) throw StencilUnderflow("dx needs nx >= 3");
    for (int j = 0; j < ny; ++j) {
        r.at(0, j) = (-3 * u.at(0, j) + 4 * u.at(1, j) - u.at(2, j)) / (2 * h);
        for (int i = 1; i < nx - 1; ++i) r.at(i, j) = (u.at(i + 1, j) - u.at(i - 1, j)) / (2 * h);
        r.at(nx - 1, j) = (3 * u.at(nx - 1, j) - 4 * u.at(nx - 2, j) + u.at(nx - 3, j)) / (2 * h);
    }
    return r;
}
inline GridFn dy(const GridFn& u) {
    GridFn r(u.grid);
    const double h = u.grid.dy;
    const int nx = u.grid.nx, ny = u.grid.ny;
    if (ny < 3) throw StencilUnderflow("dy needs ny >= 3");
    for (int i = 0; i < nx; ++i) {
        r.at(i, 0) = (-3 * u.at(i, 0) + 4 * u.at(i, 1) - u.at(i, 2)) / (2 * h);
        for (int j = 1; j < ny - 1; ++j) r.at(i, j) = (u.at(i, j + 1) - u.at(i, j - 1)) / (2 * h);
        r.at(i, ny - 1) = (3 * u.at(i, ny - 1) - 4 * u.at(i, ny - 2) + u.at(i, ny - 3)) / (2 * h);
    }
    return r;
}
inline GridFn dxx(const GridFn& u) {
    GridFn r(u.grid);
    const double h2 = u.grid.dx * u.grid.dx;
    const int nx = u.grid.nx, ny = u.grid.ny;
    if (nx < 4) throw StencilUnderflow("dxx needs nx >= 4");
    for (int j = 0; j < ny; ++j) {
        r.at(0, j) = (2 * u.at(0, j) - 5 * u.at(1, j) + 4 * u.at(2, j) - u.at(3, j)) / h2;
        for (int i = 1; i < nx - 1; ++i)
            r.at(i, j) = (u.at(i + 1, j) - 2 * u.at(i, j) + u.at(i - 1, j)) / h2;
        r.at(nx - 1, j) =
            (2 * u.at(nx - 1, j) - 5 * u.at(nx - 2, j) + 4 * u.at(nx - 3, j) - u.at(nx - 4, j)) / h2;
    }
    return r;
}
inline GridFn dyy(const GridFn& u) {
    GridFn r(u.grid);
    const double h2 = u.grid.dy * u.grid.dy;
    const int nx = u.grid.nx, ny = u.grid.ny;
    if (ny < 4) throw StencilUnderflow("dyy needs ny >= 4");
    for (int i = 0; i < nx; ++i) {
        r.at(i, 0) = (2 * u.at(i, 0) - 5 * u.at(i, 1) + 4 * u.at(i, 2) - u.at(i, 3)) / h2;
        for (int j = 1; j < ny - 1; ++j)
            r.at(i, j) = (u.at(i, j + 1) - 2 * u.at(i, j) + u.at(i, j - 1)) / h2;
        r.at(i, ny - 1) =
            (2 * u.at(i, ny - 1) - 5 * u.at(i, ny - 2) + 4 * u.at(i, ny - 3) - u.at(i, ny - 4)) / h2;
    }
    return r;
}
inline GridFn dxy(const GridFn& u) { return dy(dx(u)); }

// d^{ix+iy} u / dx^{ix} dy^{iy} by repeated first differences.
inline GridFn deriv(const GridFn& u, int ix, int iy) {
    GridFn r = u;
    for (int k = 0; k < ix; ++k) r = dx(r);
    for (int k = 0; k < iy; ++k) r = dy(r);
    return r;
}

// Max over the grid of all partials up to `order` (discrete C^k norm).
inline double ck_norm(const GridFn& u, int order) {
    double m = 0;
    for (int ix = 0; ix <= order; ++ix)
        for (int iy = 0; ix + iy <= order; ++iy) m = std::max(m, deriv(u, ix, iy).max_abs());
    return m;
}

// 4th-order one-sided first derivative at the low edge of a 1D sample.
inline double one_sided_deriv4(const double* f, double h) {
    return (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
}

} // namespace fd

// Trapezoidal quadrature over the full grid.
inline double integrate(const GridFn& u) {
    double s = 0;
    const Grid2& g = u.grid;
    for (int i = 0; i < g.nx; ++i) {
        double wi = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
        for (int j = 0; j < g.ny; ++j) {
            double wj = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
            s += wi * wj * u.at(i, j);
        }
    }
    return s * g.dx * g.dy;
}

inline double l2_norm(const GridFn& u) {
    GridFn sq = u * u;
    return std::sqrt(integrate(sq));
}

// Plain discrete Sobolev norm sum_{|a|<=m} ||d^a u||_{L2}.
inline double hm_norm(const GridFn& u, int m) {
    double s = 0;
    for (int ix = 0; ix <= m; ++ix)
        for (int iy = 0; ix + iy <= m; ++iy) {
            double n = l2_norm(fd::deriv(u, ix, iy));
            s += n * n;
        }
    return std::sqrt(s);
}

inline void write_csv(const GridFn& u, const std::string& path,
                      const std::string& value_name = "value") {
    std::ofstream out(path);
    out.precision(17);
    out << "# frame=" << u.grid.frame << " nx=" << u.grid.nx << " ny=" << u.grid.ny
        << " dx=" << u.grid.dx << " dy=" << u.grid.dy << " x0=" << u.grid.x0
        << " y0=" << u.grid.y0 << "\n";
    out << "x,y," << value_name << "\n";
    for (int i = 0; i < u.grid.nx; ++i)
        for (int j = 0; j < u.grid.ny; ++j)
            out << u.grid.x(i) << "," << u.grid.y(j) << "," << u.at(i, j) << "\n";
}

} // namespace darboux

#endif
