#ifndef DARBOUX_GEOMETRY_HPP
#define DARBOUX_GEOMETRY_HPP

// Metric-level differential geometry: curvature, covariant Hessian, the
// Darboux residual and its linearization, and the Taylor-matched approximate
// solution.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "darboux/field.hpp"
#include "darboux/grid.hpp"

namespace darboux {

struct Metric2 {
    AnalyticField g11, g12, g22;
    int m0 = 16; // smoothness order budget

    AnalyticField det() const { return g11 * g22 - g12 * g12; }

    // Positivity on a sampled window; throws DegenerateMetric on failure.
    void check_positive(double xmin, double xmax, double ymin, double ymax,
                        int samples = 17) const {
        for (int i = 0; i < samples; ++i)
            for (int j = 0; j < samples; ++j) {
                double x = xmin + (xmax - xmin) * i / (samples - 1.0);
                double y = ymin + (ymax - ymin) * j / (samples - 1.0);
                double a = g11(x, y), d = det()(x, y);
                if (!(a > 0) || !(d > 0))
                    throw DegenerateMetric("metric not positive definite at (" +
                                           std::to_string(x) + "," + std::to_string(y) + ")");
            }
    }

    // Pull back through x -> s*x, y -> s*y (the paper's epsilon^2 rescaling).
    Metric2 rescaled(double s) const {
        return Metric2{g11.affine(0, s, 0, s), g12.affine(0, s, 0, s), g22.affine(0, s, 0, s), m0};
    }
};

struct Christoffel {
    // G[t][i][j] = Gamma^t_{ij}, symmetric in (i, j)
    std::array<std::array<std::array<AnalyticField, 2>, 2>, 2> G;
};

inline Christoffel christoffel(const Metric2& g) {
    if (g.m0 < 2) throw RegularityBudgetExceeded("christoffel needs m0 >= 2");
    AnalyticField det = g.det();
    AnalyticField inv11 = g.g22 / det, inv12 = AnalyticField::constant(-1) * g.g12 / det,
                  inv22 = g.g11 / det;
    std::array<std::array<AnalyticField, 2>, 2> gm = {{{g.g11, g.g12}, {g.g12, g.g22}}};
    std::array<std::array<AnalyticField, 2>, 2> gi = {{{inv11, inv12}, {inv12, inv22}}};

    auto dg = [&](int a, int b, int dir) { return gm[a][b].derivative(dir == 0 ? 1 : 0, dir == 0 ? 0 : 1); };

    Christoffel c;
    for (int t = 0; t < 2; ++t)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                AnalyticField s = AnalyticField::constant(0);
                for (int k = 0; k < 2; ++k)
                    s = s + gi[t][k] * (dg(j, k, i) + dg(i, k, j) - dg(i, j, k));
                c.G[t][i][j] = 0.5 * s;
            }
    return c;
}

// Brioschi formula. For graph metrics this reduces to det Hess F / (1+|dF|^2)^2
// (pinned by tests).
inline AnalyticField gauss_curvature(const Metric2& g) {
    if (g.m0 < 2) throw RegularityBudgetExceeded("gauss_curvature needs m0 >= 2");
    const AnalyticField &E = g.g11, &F = g.g12, &G = g.g22;
    AnalyticField Ex = E.dx(), Ey = E.dy();
    AnalyticField Fx = F.dx(), Fy = F.dy();
    AnalyticField Gx = G.dx(), Gy = G.dy();
    AnalyticField Eyy = Ey.dy(), Gxx = Gx.dx(), Fxy = Fx.dy();

    AnalyticField m00 = -0.5 * Eyy + Fxy - 0.5 * Gxx;
    AnalyticField m01 = 0.5 * Ex;
    AnalyticField m02 = Fx - 0.5 * Ey;
    AnalyticField m10 = Fy - 0.5 * Gx;
    AnalyticField m20 = 0.5 * Gy;

    auto det3 = [](const AnalyticField& a00, const AnalyticField& a01, const AnalyticField& a02,
                   const AnalyticField& a10, const AnalyticField& a11, const AnalyticField& a12,
                   const AnalyticField& a20, const AnalyticField& a21, const AnalyticField& a22) {
        return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) +
               a02 * (a10 * a21 - a11 * a20);
    };
    AnalyticField d1 = det3(m00, m01, m02, m10, E, F, m20, F, G);
    AnalyticField d2 = det3(AnalyticField::constant(0), 0.5 * Ey, 0.5 * Gx,
                            0.5 * Ey, E, F, 0.5 * Gx, F, G);
    AnalyticField den = E * G - F * F;
    return (d1 - d2) / (den * den);
}

struct CovariantHessian {
    AnalyticField h11, h12, h22; // nabla_ij z
};

inline CovariantHessian covariant_hessian(const Metric2& g, const AnalyticField& z) {
    if (z.max_order() < 2) throw RegularityBudgetExceeded("covariant_hessian needs z order >= 2");
    Christoffel c = christoffel(g);
    AnalyticField zx = z.dx(), zy = z.dy();
    CovariantHessian h;
    h.h11 = z.derivative(2, 0) - (c.G[0][0][0] * zx + c.G[1][0][0] * zy);
    h.h12 = z.derivative(1, 1) - (c.G[0][0][1] * zx + c.G[1][0][1] * zy);
    h.h22 = z.derivative(0, 2) - (c.G[0][1][1] * zx + c.G[1][1][1] * zy);
    return h;
}

// |grad_g z|^2 = g^{ij} dz_i dz_j
inline AnalyticField metric_gradient_sq(const Metric2& g, const AnalyticField& z) {
    AnalyticField det = g.det();
    AnalyticField zx = z.dx(), zy = z.dy();
    return (g.g22 * zx * zx - 2.0 * (g.g12 * zx * zy) + g.g11 * zy * zy) / det;
}

// Phi(z) = det Hess_g z - K (det g)(1 - |grad_g z|^2), at full z.
inline AnalyticField darboux_residual(const Metric2& g, const AnalyticField& z) {
    CovariantHessian h = covariant_hessian(g, z);
    AnalyticField K = gauss_curvature(g);
    return h.h11 * h.h22 - h.h12 * h.h12 - K * g.det() * (AnalyticField::constant(1) - metric_gradient_sq(g, z));
}

// ---------------------------------------------------------------------------
// Graph metrics (first fundamental form of the graph z = F(x, y)); these are
// the embedding oracles used throughout the tests: z = F solves the Darboux
// equation exactly.
inline Metric2 graph_metric(const AnalyticField& F, int m0 = 16) {
    AnalyticField Fx = F.dx(), Fy = F.dy();
    return Metric2{AnalyticField::constant(1) + Fx * Fx, Fx * Fy,
                   AnalyticField::constant(1) + Fy * Fy, m0};
}

// Registered graph functions (see External Interfaces).
inline AnalyticField graph_function(const std::string& id) {
    AnalyticField X = AnalyticField::x(), Y = AnalyticField::y();
    if (id == "paraboloid") return 0.5 * (X * X + Y * Y);
    if (id == "elliptic_cusp") // det Hess = x^4 - y^2, zero set y = +-x^2
        return (1.0 / 20.0) * (X * X * X * X * X) + 0.5 * (X * Y * Y);
    if (id == "transverse") // det Hess = x^2 - y^2, zero set y = +-x
        return (1.0 / 6.0) * (X * X * X) + 0.5 * (X * Y * Y);
    if (id == "hyperbolic_cusp") // det Hess = |y|^0.4 (x^2 - |y|^2.4), zero set x = +-|y|^1.2
        return (1.0 / 8.4) * (X * X * X) + (1.0 / 2.4) * (X * abspowf2(Y, 2.4));
    throw error("unknown graph function id: " + id);
}

inline Metric2 metric_preset(const std::string& name) {
    AnalyticField X = AnalyticField::x(), Y = AnalyticField::y();
    if (name == "euclidean")
        return Metric2{AnalyticField::constant(1), AnalyticField::constant(0),
                       AnalyticField::constant(1), 64};
    if (name == "sphere_patch") {
        // g = dx^2 + sin^2(x) dy^2 recentered at x = 1; K = 1, z = cos(x)
        AnalyticField s = sinf2(X + 1.0);
        return Metric2{AnalyticField::constant(1), AnalyticField::constant(0), s * s, 32};
    }
    if (name.rfind("graph:", 0) == 0) return graph_metric(graph_function(name.substr(6)));
    if (name == "elliptic_cusp_graph") return graph_metric(graph_function("elliptic_cusp"));
    if (name == "hyperbolic_cusp_graph") return graph_metric(graph_function("hyperbolic_cusp"));
    throw error("unknown metric preset: " + name);
}

// Polynomial metric from coefficient tables c[i][j] for x^i y^j.
inline AnalyticField polynomial_field(const std::vector<std::vector<double>>& c) {
    using namespace ex;
    NodePtr s = ex::constant(0);
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c[i].size(); ++j) {
            if (c[i][j] == 0) continue;
            NodePtr m = ex::constant(c[i][j]);
            for (std::size_t k = 0; k < i; ++k) m = ex::mul(m, varx());
            for (std::size_t k = 0; k < j; ++k) m = ex::mul(m, vary());
            s = ex::add(s, m);
        }
    return AnalyticField(s);
}

// ---------------------------------------------------------------------------
// Grid-side geometry: cached samples of all metric-level fields on a grid,
// pointwise Darboux residual and linearization for z = z0 + eps^5 w with w a
// grid function.

struct GeometryOnGrid {
    Grid2 grid;
    GridFn g11, g12, g22, det, inv11, inv12, inv22;
    GridFn K;
    // Christoffels
    GridFn G111, G112, G122, G211, G212, G222;
    // z0 pieces (analytic part of the ansatz)
    GridFn z0x, z0y, h011, h012, h022; // gradient and covariant Hessian of z0

    GeometryOnGrid(const Metric2& g, const AnalyticField& z0, const Grid2& gr)
        : grid(gr),
          g11(gr, g.g11), g12(gr, g.g12), g22(gr, g.g22),
          det(gr, g.det()),
          inv11(gr), inv12(gr), inv22(gr),
          K(gr, gauss_curvature(g)),
          G111(gr), G112(gr), G122(gr), G211(gr), G212(gr), G222(gr),
          z0x(gr, z0.dx()), z0y(gr, z0.dy()),
          h011(gr), h012(gr), h022(gr) {
        Christoffel c = christoffel(g);
        G111 = GridFn(gr, c.G[0][0][0]); G112 = GridFn(gr, c.G[0][0][1]);
        G122 = GridFn(gr, c.G[0][1][1]); G211 = GridFn(gr, c.G[1][0][0]);
        G212 = GridFn(gr, c.G[1][0][1]); G222 = GridFn(gr, c.G[1][1][1]);
        CovariantHessian h = covariant_hessian(g, z0);
        h011 = GridFn(gr, h.h11); h012 = GridFn(gr, h.h12); h022 = GridFn(gr, h.h22);
        for (int k = 0; k < gr.size(); ++k) {
            double d = det.v[k];
            if (!(d > 0) || !(g11.v[k] > 0))
                throw DegenerateMetric("grid sample not positive definite");
            inv11.v[k] = g22.v[k] / d;
            inv12.v[k] = -g12.v[k] / d;
            inv22.v[k] = g11.v[k] / d;
        }
    }
};

// Covariant Hessian entries of z = z0 + eps5 * w on the grid (w by finite
// differences; z0 exactly).
struct HessGrid {
    GridFn h11, h12, h22, zx, zy;
};

inline HessGrid ansatz_hessian(const GeometryOnGrid& geo, const GridFn& w, double eps5) {
    HessGrid r{GridFn(geo.grid), GridFn(geo.grid), GridFn(geo.grid), GridFn(geo.grid), GridFn(geo.grid)};
    GridFn wx = fd::dx(w), wy = fd::dy(w);
    GridFn wxx = fd::dxx(w), wyy = fd::dyy(w), wxy = fd::dxy(w);
    for (int k = 0; k < geo.grid.size(); ++k) {
        double zx = geo.z0x.v[k] + eps5 * wx.v[k];
        double zy = geo.z0y.v[k] + eps5 * wy.v[k];
        r.zx.v[k] = zx;
        r.zy.v[k] = zy;
        r.h11.v[k] = geo.h011.v[k] + eps5 * (wxx.v[k] - geo.G111.v[k] * wx.v[k] - geo.G211.v[k] * wy.v[k]);
        r.h12.v[k] = geo.h012.v[k] + eps5 * (wxy.v[k] - geo.G112.v[k] * wx.v[k] - geo.G212.v[k] * wy.v[k]);
        r.h22.v[k] = geo.h022.v[k] + eps5 * (wyy.v[k] - geo.G122.v[k] * wx.v[k] - geo.G222.v[k] * wy.v[k]);
    }
    return r;
}

// Phi(w) = det Hess_g(z0 + eps^5 w) - K det g (1 - |grad_g z|^2), on the grid.
inline GridFn darboux_residual_grid(const GeometryOnGrid& geo, const GridFn& w, double eps) {
    double e5 = std::pow(eps, 5);
    HessGrid h = ansatz_hessian(geo, w, e5);
    GridFn r(geo.grid);
    for (int k = 0; k < geo.grid.size(); ++k) {
        double grad2 = geo.inv11.v[k] * h.zx.v[k] * h.zx.v[k] +
                       2 * geo.inv12.v[k] * h.zx.v[k] * h.zy.v[k] +
                       geo.inv22.v[k] * h.zy.v[k] * h.zy.v[k];
        r.v[k] = h.h11.v[k] * h.h22.v[k] - h.h12.v[k] * h.h12.v[k] -
                 geo.K.v[k] * geo.det.v[k] * (1.0 - grad2);
    }
    return r;
}

struct LinearizationCoeffs {
    GridFn a11, a12, a22;       // cofactor of the covariant Hessian of z
    GridFn b1, b2;              // first-order gradient terms 2 K |g| (grad_g z)
    double epsilon = 1.0;
    std::vector<std::string> warnings;
};

// Coefficients of the linearized operator at z = z0 + eps^5 w:
//   dPhi[dz] = a11 n11(dz) + 2 a12 n12(dz) + a22 n22(dz) + b . grad dz
// with a11 = n22 z, a22 = n11 z, a12 = -n12 z.
inline LinearizationCoeffs linearize(const GeometryOnGrid& geo, const GridFn& w, double eps) {
    double e5 = std::pow(eps, 5);
    LinearizationCoeffs out{GridFn(geo.grid), GridFn(geo.grid), GridFn(geo.grid),
                            GridFn(geo.grid), GridFn(geo.grid), eps, {}};
    double wc4 = fd::ck_norm(w, std::min(4, 2)); // C^2 proxy; full C^4 below if grid allows
    if (w.grid.nx >= 9 && w.grid.ny >= 9) wc4 = fd::ck_norm(w, 4);
    if (wc4 > 1.0)
        out.warnings.push_back("iterate |w|_C4 = " + std::to_string(wc4) + " exceeds 1");
    HessGrid h = ansatz_hessian(geo, w, e5);
    for (int k = 0; k < geo.grid.size(); ++k) {
        out.a11.v[k] = h.h22.v[k];
        out.a22.v[k] = h.h11.v[k];
        out.a12.v[k] = -h.h12.v[k];
        double kd = geo.K.v[k] * geo.det.v[k];
        double gx = geo.inv11.v[k] * h.zx.v[k] + geo.inv12.v[k] * h.zy.v[k];
        double gy = geo.inv12.v[k] * h.zx.v[k] + geo.inv22.v[k] * h.zy.v[k];
        out.b1.v[k] = 2 * kd * gx;
        out.b2.v[k] = 2 * kd * gy;
    }
    return out;
}

// Apply the linearization to a grid function (direction u).
inline GridFn apply_linearization(const GeometryOnGrid& geo, const LinearizationCoeffs& L,
                                  const GridFn& u) {
    GridFn ux = fd::dx(u), uy = fd::dy(u);
    GridFn uxx = fd::dxx(u), uyy = fd::dyy(u), uxy = fd::dxy(u);
    GridFn r(geo.grid);
    for (int k = 0; k < geo.grid.size(); ++k) {
        double n11 = uxx.v[k] - geo.G111.v[k] * ux.v[k] - geo.G211.v[k] * uy.v[k];
        double n12 = uxy.v[k] - geo.G112.v[k] * ux.v[k] - geo.G212.v[k] * uy.v[k];
        double n22 = uyy.v[k] - geo.G122.v[k] * ux.v[k] - geo.G222.v[k] * uy.v[k];
        r.v[k] = L.a11.v[k] * n11 + 2 * L.a12.v[k] * n12 + L.a22.v[k] * n22 +
                 L.b1.v[k] * ux.v[k] + L.b2.v[k] * uy.v[k];
    }
    return r;
}

// ---------------------------------------------------------------------------
// Approximate solution z0 by order-by-order Taylor matching:
// gauge z0(x,0) = x^2/2, dz0/dy (x,0) = 0; the coefficient of x^k y^l (l >= 2)
// is solved from the residual coefficient of x^k y^{l-2}. The system is
// triangular in the y-power, with unit leading divisor after the gauge.

struct JetGeometry {
    Jet2 g11, g12, g22, det, inv11, inv12, inv22, K;
    std::array<std::array<std::array<Jet2, 2>, 2>, 2> G; // Christoffel jets

    JetGeometry(const Metric2& g, int order) {
        Point2 o{0, 0};
        g11 = taylor_expand(g.g11, o, order);
        g12 = taylor_expand(g.g12, o, order);
        g22 = taylor_expand(g.g22, o, order);
        det = (g11 * g22 - g12 * g12).truncated(order);
        Jet2 dinv = det.reciprocal();
        inv11 = g22 * dinv;
        inv12 = -1.0 * (g12 * dinv);
        inv22 = g11 * dinv;
        std::array<std::array<Jet2, 2>, 2> gm = {{{g11, g12}, {g12, g22}}};
        std::array<std::array<Jet2, 2>, 2> gi = {{{inv11, inv12}, {inv12, inv22}}};
        for (int t = 0; t < 2; ++t)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    Jet2 s(order, o);
                    for (int k = 0; k < 2; ++k) {
                        Jet2 term = gm[j][k].derivative(i == 0 ? 1 : 0, i == 0 ? 0 : 1) +
                                    gm[i][k].derivative(j == 0 ? 1 : 0, j == 0 ? 0 : 1) -
                                    gm[i][j].derivative(k == 0 ? 1 : 0, k == 0 ? 0 : 1);
                        s = s + gi[t][k] * term;
                    }
                    G[t][i][j] = 0.5 * s;
                }
        K = brioschi_jet(order);
    }

    Jet2 residual(const Jet2& z) const {
        Jet2 zx = z.derivative(1, 0), zy = z.derivative(0, 1);
        Jet2 h11 = z.derivative(2, 0) - (G[0][0][0] * zx + G[1][0][0] * zy);
        Jet2 h12 = z.derivative(1, 1) - (G[0][0][1] * zx + G[1][0][1] * zy);
        Jet2 h22 = z.derivative(0, 2) - (G[0][1][1] * zx + G[1][1][1] * zy);
        Jet2 grad2 = inv11 * (zx * zx) + 2.0 * (inv12 * (zx * zy)) + inv22 * (zy * zy);
        Jet2 one(z.order(), z.center());
        one.set_coeff(0, 0, 1.0);
        return h11 * h22 - h12 * h12 - K * det * (one - grad2);
    }

private:
    Jet2 brioschi_jet(int order) const {
        const Jet2 &E = g11, &F = g12, &G2 = g22;
        Jet2 Ex = E.derivative(1, 0), Ey = E.derivative(0, 1);
        Jet2 Fx = F.derivative(1, 0), Fy = F.derivative(0, 1);
        Jet2 Gx = G2.derivative(1, 0), Gy = G2.derivative(0, 1);
        Jet2 m00 = -0.5 * Ey.derivative(0, 1) + Fx.derivative(0, 1) - 0.5 * Gx.derivative(1, 0);
        Jet2 m01 = 0.5 * Ex, m02 = Fx - 0.5 * Ey;
        Jet2 m10 = Fy - 0.5 * Gx, m20 = 0.5 * Gy;
        auto det3 = [&](const Jet2& a00, const Jet2& a01, const Jet2& a02, const Jet2& a10,
                        const Jet2& a11, const Jet2& a12, const Jet2& a20, const Jet2& a21,
                        const Jet2& a22) {
            return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) +
                   a02 * (a10 * a21 - a11 * a20);
        };
        Jet2 zero(order, {0, 0});
        Jet2 d1 = det3(m00, m01, m02, m10, E, F, m20, F, G2);
        Jet2 d2 = det3(zero, 0.5 * Ey, 0.5 * Gx, 0.5 * Ey, E, F, 0.5 * Gx, F, G2);
        Jet2 den = (E * G2 - F * F) * (E * G2 - F * F);
        return ((d1 - d2) * den.reciprocal()).truncated(order);
    }
};

struct ApproximateSolution {
    Jet2 z0;
    bool degenerate_quadratic = false; // K(0) = 0 case: one zero Hessian eigenvalue
    double max_matched_residual = 0;   // largest |residual coeff| through order M-2
};

inline ApproximateSolution approximate_solution(const Metric2& g, int M) {
    if (g.m0 < M + 2) throw RegularityBudgetExceeded("approximate_solution needs m0 >= M+2");
    if (M < 2) throw error("approximate_solution: M >= 2 required");
    JetGeometry jg(g, M);
    Jet2 z0(M, {0, 0});
    z0.set_coeff(2, 0, 0.5); // gauge: z0(x,0) = x^2/2, so a22(0) = nabla_11 z0 (0) = 1

    for (int l = 2; l <= M; ++l) {
        for (int k = 0; k + l <= M; ++k) {
            Jet2 R = jg.residual(z0);
            double target = R.coeff(k, l - 2);
            double divisor = static_cast<double>(l) * (l - 1); // times nabla_11 z0(0,0) = 1
            if (std::abs(divisor) < 1e-14)
                throw TaylorSolveSingular("order " + std::to_string(l));
            z0.set_coeff(k, l, z0.coeff(k, l) - target / divisor);
        }
    }
    ApproximateSolution out;
    out.z0 = z0;
    Jet2 R = jg.residual(z0);
    for (int i = 0; i + 2 <= M; ++i)
        for (int j = 0; i + j <= M - 2; ++j)
            out.max_matched_residual = std::max(out.max_matched_residual, std::abs(R.coeff(i, j)));
    // K(0) = 0 forces det Hess z0(0) = 0: flag the degenerate quadratic part.
    out.degenerate_quadratic = std::abs(jg.K.coeff(0, 0)) < 1e-13;
    return out;
}

} // namespace darboux

#endif
