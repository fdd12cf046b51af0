#ifndef DARBOUX_DOMAIN_HPP
#define DARBOUX_DOMAIN_HPP

// Cusp-domain description, hypothesis verification, region decomposition, and
// the coordinate changes: rescaling, characteristic normalization, elliptic
// and hyperbolic cusp opening, and the cube-root map.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "darboux/field.hpp"
#include "darboux/grid.hpp"

namespace darboux {

// --------------------------------------------------------------------------
// Exact rational arithmetic for the Theorem exponent thresholds.
struct Rational {
    long long num = 0, den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(std::abs(num), den);
        if (g > 1) { num /= g; den /= g; }
        if (den == 0) throw error("Rational: zero denominator");
    }
    friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
    friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
    friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
    friend Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
    friend bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(Rational a, Rational b) { return a.num * b.den <= b.num * a.den; }
    friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }

    long long ceil() const { return num >= 0 ? (num + den - 1) / den : -((-num) / den); }
    long long floor() const { return num >= 0 ? num / den : -(((-num) + den - 1) / den); }
    double value() const { return static_cast<double>(num) / den; }
};

// Parse an exact decimal string like "0.2" or "-1.25" into a rational.
inline Rational parse_decimal(const std::string& s) {
    std::size_t dot = s.find('.');
    bool neg = !s.empty() && s[0] == '-';
    std::string ip = dot == std::string::npos ? s : s.substr(0, dot);
    std::string fp = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (neg) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    long long den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    long long num = std::stoll(ip) * den + (fp.empty() ? 0 : std::stoll(fp));
    if (neg) num = -num;
    return Rational{num, den};
}

// --------------------------------------------------------------------------
// CuspGraph: boundary graph h with sharpness metadata and condition checks.

struct CuspGraph {
    // eval(t, k) = k-th derivative of h at t (k = 0 is the value)
    std::function<double(double, int)> eval;
    double alpha_bar = 0; // sharpness in the lower bound h >= C x^{1+abar}
    double C_cusp = 0.5;  // constant in the lower bound
    int m1 = 8;           // derivative budget

    struct PowerForm {
        double coef = 1, p = 2;
    };
    std::optional<PowerForm> power; // set for presets; enables closed-form 1/h quadratures

    double operator()(double t) const { return eval(t, 0); }
    double deriv(double t, int k = 1) const { return eval(t, k); }

    // presets: "quadratic", "power:<p>", "sharp:<abar>" or "sharp:<abar>:<C>"
    static CuspGraph preset(const std::string& spec) {
        auto make_power = [](double c, double p, double abar, double C, int m1) {
            CuspGraph g;
            g.power = PowerForm{c, p};
            g.alpha_bar = abar;
            g.C_cusp = C;
            g.m1 = m1;
            g.eval = [c, p](double t, int k) {
                double f = c;
                for (int i = 0; i < k; ++i) f *= (p - i);
                return f * std::pow(t, p - k);
            };
            return g;
        };
        if (spec == "quadratic") return make_power(1.0, 2.0, 1.0, 1.0, 8);
        if (spec.rfind("power:", 0) == 0) {
            double p = parse_decimal(spec.substr(6)).value();
            return make_power(1.0, p, p - 1.0, 1.0, 8);
        }
        if (spec.rfind("sharp:", 0) == 0) {
            std::string rest = spec.substr(6);
            std::size_t c2 = rest.find(':');
            double abar = parse_decimal(c2 == std::string::npos ? rest : rest.substr(0, c2)).value();
            double C = c2 == std::string::npos ? 1.0 : parse_decimal(rest.substr(c2 + 1)).value();
            return make_power(C, 1.0 + abar, abar, C, 8);
        }
        throw error("unknown cusp graph preset: " + spec);
    }

    // Graph in the rescaled frame: h_eps(x) = h(eps^2 x) / eps^2.
    CuspGraph rescaled(double eps) const {
        CuspGraph g = *this;
        double e2 = eps * eps;
        if (power) g.power = PowerForm{power->coef * std::pow(e2, power->p - 1.0), power->p};
        auto base = eval;
        g.eval = [base, e2](double t, int k) { return std::pow(e2, k - 1) * base(e2 * t, k); };
        return g;
    }

    // Scaled graph s*h (asymmetric-cusp max handling and tests).
    CuspGraph scaled(double s) const {
        CuspGraph g = *this;
        if (power) g.power = PowerForm{power->coef * s, power->p};
        auto base = eval;
        g.eval = [base, s](double t, int k) { return s * base(t, k); };
        return g;
    }

    struct ConditionReport {
        bool tip_limits = false;      // (1.1): h -> 0 and h' -> 0 at the tip
        bool monotone_ratio = false;  // (1.2): h(x)/x nondecreasing
        bool derivative_bounds = false; // (1.3): |h^(l) h^(l-1)| <= C_l
        bool sharpness_lower = true;  // (1.4): h >= C x^{1+abar} (hyperbolic only)
        std::vector<double> C_l;      // measured constants per order
        double worst_sharpness_ratio = 0;
        bool all(bool hyperbolic) const {
            return tip_limits && monotone_ratio && derivative_bounds &&
                   (!hyperbolic || sharpness_lower);
        }
    };

    ConditionReport check_conditions(double xmax = 1.0, bool hyperbolic = false,
                                     int max_order = -1) const {
        ConditionReport r;
        if (max_order < 0) max_order = std::min(m1, 6);
        // (1.1) sampled toward the tip
        double h_last = (*this)(xmax), hp_last = std::abs(deriv(xmax, 1));
        bool positive = true;
        for (int k = 1; k <= 24; ++k) {
            double t = xmax * std::pow(2.0, -k);
            double hv = (*this)(t), hp = std::abs(deriv(t, 1));
            if (hv <= 0) { positive = false; break; }
            h_last = hv;
            hp_last = hp;
        }
        r.tip_limits = positive && h_last < 1e-4 * (*this)(xmax) &&
                       hp_last < 0.25 * std::abs(deriv(xmax, 1)) + 1e-3;
        // (1.2)
        r.monotone_ratio = true;
        double prev = -1;
        for (int k = 0; k <= 64; ++k) {
            double t = xmax * (k + 1) / 65.0;
            double ratio = (*this)(t) / t;
            if (ratio < prev - 1e-12 * std::abs(prev)) r.monotone_ratio = false;
            prev = ratio;
        }
        // (1.3)
        r.C_l.assign(max_order + 1, 0.0);
        for (int l = 0; l <= max_order; ++l) {
            double c = 0;
            for (int k = 0; k <= 48; ++k) {
                double t = xmax * std::pow(0.82, k);
                double hv = (*this)(t);
                c = std::max(c, std::abs(deriv(t, l) * std::pow(hv, l - 1)));
            }
            r.C_l[l] = c;
        }
        r.derivative_bounds = std::isfinite(std::accumulate(r.C_l.begin(), r.C_l.end(), 0.0));
        // (1.4)
        if (hyperbolic) {
            r.sharpness_lower = true;
            for (int k = 0; k <= 48; ++k) {
                double t = xmax * std::pow(0.85, k);
                double bound = C_cusp * std::pow(t, 1.0 + alpha_bar);
                double ratio = (*this)(t) / bound;
                r.worst_sharpness_ratio = k == 0 ? ratio : std::min(r.worst_sharpness_ratio, ratio);
                if ((*this)(t) < bound * (1 - 1e-12)) r.sharpness_lower = false;
            }
        }
        return r;
    }
};

// Internal weight for asymmetric cusps: max of the two sides.
inline CuspGraph max_graph(const CuspGraph& a, const CuspGraph& b) {
    CuspGraph g = a;
    g.power.reset();
    auto ea = a.eval, eb = b.eval;
    g.eval = [ea, eb](double t, int k) {
        // pointwise max for the value; derivative follows the larger branch
        return ea(t, 0) >= eb(t, 0) ? ea(t, k) : eb(t, k);
    };
    g.alpha_bar = std::min(a.alpha_bar, b.alpha_bar);
    g.C_cusp = std::max(a.C_cusp, b.C_cusp);
    g.m1 = std::min(a.m1, b.m1);
    return g;
}

// --------------------------------------------------------------------------
// Coordinate maps.

struct Rect {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool contains(Point2 p, double pad = 0) const {
        return p.x >= x0 - pad && p.x <= x1 + pad && p.y >= y0 - pad && p.y <= y1 + pad;
    }
};

struct CoordinateMap {
    std::string frame_from = "a", frame_to = "b";
    std::function<Point2(Point2)> forward, inverse;
    // jacobian(p): d(to)/d(from) at the from-point p, row-major [J11 J12 J21 J22]
    std::function<std::array<double, 4>(Point2)> jacobian;
    // inverse_jacobian(p): d(from)/d(to) at the from-point p
    std::function<std::array<double, 4>(Point2)> inverse_jacobian;

    static CoordinateMap identity(const std::string& frame = "xy") {
        CoordinateMap m;
        m.frame_from = m.frame_to = frame;
        m.forward = m.inverse = [](Point2 p) { return p; };
        m.jacobian = m.inverse_jacobian = [](Point2) {
            return std::array<double, 4>{1, 0, 0, 1};
        };
        return m;
    }
};

inline std::array<double, 4> invert2(const std::array<double, 4>& j) {
    double det = j[0] * j[3] - j[1] * j[2];
    return {j[3] / det, -j[1] / det, -j[2] / det, j[0] / det};
}
inline std::array<double, 4> matmul2(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// after o before: p -> after.forward(before.forward(p))
inline CoordinateMap compose(const CoordinateMap& after, const CoordinateMap& before) {
    CoordinateMap m;
    m.frame_from = before.frame_from;
    m.frame_to = after.frame_to;
    auto bf = before.forward, bi = before.inverse, af = after.forward, ai = after.inverse;
    auto bj = before.jacobian, aj = after.jacobian, bij = before.inverse_jacobian,
         aij = after.inverse_jacobian;
    m.forward = [bf, af](Point2 p) { return af(bf(p)); };
    m.inverse = [bi, ai](Point2 p) { return bi(ai(p)); };
    m.jacobian = [bf, bj, aj](Point2 p) { return matmul2(aj(bf(p)), bj(p)); };
    m.inverse_jacobian = [bf, bij, aij](Point2 p) { return matmul2(bij(p), aij(bf(p))); };
    return m;
}

// The paper's rescaling (x_hat, y_hat) = (eps^2 x, eps^2 y): forward maps the
// working (rescaled) frame to the chart frame.
inline CoordinateMap rescale(double eps) {
    if (!(eps > 0)) throw error("rescale: eps > 0 required");
    double s = eps * eps;
    CoordinateMap m;
    m.frame_from = "rescaled";
    m.frame_to = "chart";
    m.forward = [s](Point2 p) { return Point2{s * p.x, s * p.y}; };
    m.inverse = [s](Point2 p) { return Point2{p.x / s, p.y / s}; };
    m.jacobian = [s](Point2) { return std::array<double, 4>{s, 0, 0, s}; };
    m.inverse_jacobian = [s](Point2) { return std::array<double, 4>{1 / s, 0, 0, 1 / s}; };
    return m;
}

inline CoordinateMap cube_root_map() {
    CoordinateMap m;
    m.frame_from = "xy";
    m.frame_to = "cuberoot";
    m.forward = [](Point2 p) { return Point2{std::cbrt(p.x), p.y}; };
    m.inverse = [](Point2 p) { return Point2{p.x * p.x * p.x, p.y}; };
    m.jacobian = [](Point2 p) {
        double c = std::cbrt(p.x);
        return std::array<double, 4>{1.0 / (3 * c * c), 0, 0, 1};
    };
    m.inverse_jacobian = [](Point2 p) {
        double c = std::cbrt(p.x);
        return std::array<double, 4>{3 * c * c, 0, 0, 1};
    };
    return m;
}

inline CoordinateMap mirror_x() {
    CoordinateMap m;
    m.frame_from = "xy";
    m.frame_to = "mirrored";
    m.forward = m.inverse = [](Point2 p) { return Point2{-p.x, p.y}; };
    m.jacobian = m.inverse_jacobian = [](Point2) { return std::array<double, 4>{-1, 0, 0, 1}; };
    return m;
}

// Swap the roles of x and y (hyperbolic cusps open along the y-axis).
inline CoordinateMap swap_xy() {
    CoordinateMap m;
    m.frame_from = "xy";
    m.frame_to = "yx";
    m.forward = m.inverse = [](Point2 p) { return Point2{p.y, p.x}; };
    m.jacobian = m.inverse_jacobian = [](Point2) { return std::array<double, 4>{0, 1, 1, 0}; };
    return m;
}

// --------------------------------------------------------------------------
// Characteristic coordinates: ybar = y, xbar constant along dx/dy = r(x, y),
// xbar(x, 0) = x. The x-derivative of xbar is integrated alongside
// (variational equation), and xbar_y := -r xbar_x then satisfies the defining
// PDE identically, so the transformed mixed coefficient cancels to round-off.

struct CharacteristicMap {
    CoordinateMap map;
    std::function<double(Point2)> xbar_x; // at the from-point
    double sup_shift = 0;                 // sup |xbar - x| over the window
    double sup_jacobian_dev = 0;          // sup |xbar_x - 1|
};

inline CharacteristicMap characteristic_coords(
    const std::function<double(double, double)>& ratio, Rect window, double step,
    int substeps = 4) {
    const double pad = 0.25 * (window.x1 - window.x0);
    auto ratio_x = [ratio](double x, double y) {
        double h = 1e-6;
        return (ratio(x + h, y) - ratio(x - h, y)) / (2 * h);
    };

    // integrate (x, J) along dx/dy = r from y = y_from to y = y_to
    auto flow = [=](double x, double y_from, double y_to) -> std::array<double, 2> {
        int n = std::max(1, static_cast<int>(std::ceil(std::abs(y_to - y_from) / step))) * substeps;
        double h = (y_to - y_from) / n;
        double X = x, J = 1;
        double y = y_from;
        for (int k = 0; k < n; ++k) {
            auto f = [&](double xx, double yy) { return ratio(xx, yy); };
            double k1 = f(X, y), j1 = ratio_x(X, y) * J;
            double k2 = f(X + 0.5 * h * k1, y + 0.5 * h), j2 = ratio_x(X + 0.5 * h * k1, y + 0.5 * h) * (J + 0.5 * h * j1);
            double k3 = f(X + 0.5 * h * k2, y + 0.5 * h), j3 = ratio_x(X + 0.5 * h * k2, y + 0.5 * h) * (J + 0.5 * h * j2);
            double k4 = f(X + h * k3, y + h), j4 = ratio_x(X + h * k3, y + h) * (J + h * j3);
            X += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
            J += h / 6 * (j1 + 2 * j2 + 2 * j3 + j4);
            y += h;
            if (!(X > window.x0 - pad && X < window.x1 + pad))
                throw CharacteristicBlowup("characteristic left the window at y = " +
                                           std::to_string(y));
        }
        return {X, J};
    };

    CharacteristicMap out;
    out.map.frame_from = "xy";
    out.map.frame_to = "char";
    out.map.forward = [flow](Point2 p) {
        auto r = flow(p.x, p.y, 0.0);
        return Point2{r[0], p.y};
    };
    out.map.inverse = [flow](Point2 p) {
        auto r = flow(p.x, 0.0, p.y);
        return Point2{r[0], p.y};
    };
    out.xbar_x = [flow](Point2 p) {
        // foot sensitivity: integrate variational equation backward
        auto r = flow(p.x, p.y, 0.0);
        return r[1];
    };
    auto xx = out.xbar_x;
    out.map.jacobian = [xx, ratio](Point2 p) {
        double jx = xx(p);
        double jy = -ratio(p.x, p.y) * jx; // xbar_y = -r xbar_x (defining PDE)
        return std::array<double, 4>{jx, jy, 0, 1};
    };
    out.map.inverse_jacobian = [xx, ratio](Point2 p) {
        double jx = xx(p);
        double jy = -ratio(p.x, p.y) * jx;
        return invert2({jx, jy, 0, 1});
    };

    // monitor hooks, sampled
    for (int i = 0; i <= 12; ++i)
        for (int j = 0; j <= 12; ++j) {
            Point2 p{window.x0 + (window.x1 - window.x0) * i / 12.0,
                     window.y0 + (window.y1 - window.y0) * j / 12.0};
            Point2 q = out.map.forward(p);
            out.sup_shift = std::max(out.sup_shift, std::abs(q.x - p.x));
            out.sup_jacobian_dev = std::max(out.sup_jacobian_dev, std::abs(out.xbar_x(p) - 1.0));
        }
    return out;
}

// --------------------------------------------------------------------------
// 1/h quadrature with closed forms for power graphs.

inline double integral_inv_h(const CuspGraph& h, double a, double b) {
    if (a > b) return -integral_inv_h(h, b, a);
    if (h.power) {
        double c = h.power->coef, p = h.power->p;
        if (std::abs(p - 1.0) < 1e-14) return (std::log(b) - std::log(a)) / c;
        return (std::pow(a, 1 - p) - std::pow(b, 1 - p)) / (c * (p - 1));
    }
    // adaptive Simpson, relative tolerance 1e-10
    std::function<double(double, double, double, double, double, int)> simp =
        [&](double lo, double hi, double flo, double fmid, double fhi, int depth) -> double {
        double mid = 0.5 * (lo + hi);
        double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        double flm = 1.0 / h(lm), frm = 1.0 / h(rm);
        double whole = (hi - lo) / 6 * (flo + 4 * fmid + fhi);
        double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
        double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
        if (!std::isfinite(left + right))
            throw QuadratureFailure("1/h integral not finite on [" + std::to_string(lo) + "," +
                                    std::to_string(hi) + "]");
        if (depth > 48) throw QuadratureFailure("adaptive quadrature did not converge");
        if (std::abs(left + right - whole) < 1e-10 * std::abs(whole) + 1e-15)
            return left + right;
        return simp(lo, mid, flo, flm, fmid, depth + 1) + simp(mid, hi, fmid, frm, fhi, depth + 1);
    };
    double fa = 1.0 / h(a), fb = 1.0 / h(b), fm = 1.0 / h(0.5 * (a + b));
    return simp(a, b, fa, fm, fb, 0);
}

// Invert xt = integral_inv_h(h, xbar, xmax) for xbar (monotone decreasing).
inline double invert_opening(const CuspGraph& h, double xt, double xmax, double tip_floor) {
    if (h.power) {
        double c = h.power->coef, p = h.power->p;
        if (std::abs(p - 1.0) < 1e-14) return xmax * std::exp(-c * xt);
        double v = std::pow(xmax, 1 - p) + c * (p - 1) * xt;
        return std::pow(v, 1.0 / (1 - p));
    }
    double lo = tip_floor, hi = xmax;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double val = integral_inv_h(h, mid, xmax);
        if (val > xt) lo = mid; else hi = mid;
        if (hi - lo < 1e-14 * xmax) break;
    }
    return 0.5 * (lo + hi);
}

// Elliptic opening: (xbar, ybar) -> (xt, yt) = (int_xbar^xmax 1/h, ybar/h(xbar)).
// Maps the cusp onto the half cylinder xt >= 0, |yt| <= 1.
inline CoordinateMap open_cusp_elliptic(const CuspGraph& h, double xmax = 1.0,
                                        double tip_floor = 1e-8) {
    if (!(h(xmax) > 0)) throw QuadratureFailure("h must be positive at the outer edge");
    CoordinateMap m;
    m.frame_from = "cusp";
    m.frame_to = "cylinder";
    m.forward = [h, xmax](Point2 p) {
        return Point2{integral_inv_h(h, p.x, xmax), p.y / h(p.x)};
    };
    m.inverse = [h, xmax, tip_floor](Point2 p) {
        double xb = invert_opening(h, p.x, xmax, tip_floor);
        return Point2{xb, p.y * h(xb)};
    };
    m.jacobian = [h](Point2 p) {
        double hv = h(p.x), hp = h.deriv(p.x, 1), yt = p.y / hv;
        return std::array<double, 4>{-1 / hv, 0, -yt * hp / hv, 1 / hv};
    };
    m.inverse_jacobian = [h](Point2 p) {
        double hv = h(p.x), hp = h.deriv(p.x, 1), yt = p.y / hv;
        return std::array<double, 4>{-hv, 0, -yt * hp, hv};
    };
    return m;
}

// Hyperbolic opening: (xbar, ybar) -> (xt, yt) = (xbar/h(ybar), int_ybar^ymax 1/h).
// Maps |xbar| <= h(ybar) onto the cylinder |xt| <= 1, yt >= 0.
inline CoordinateMap open_cusp_hyperbolic(const CuspGraph& hbar, double ymax = 1.0,
                                          double tip_floor = 1e-8) {
    if (!(hbar(ymax) > 0)) throw QuadratureFailure("hbar must be positive at the outer edge");
    CoordinateMap m;
    m.frame_from = "cusp";
    m.frame_to = "cylinder";
    m.forward = [hbar, ymax](Point2 p) {
        return Point2{p.x / hbar(p.y), integral_inv_h(hbar, p.y, ymax)};
    };
    m.inverse = [hbar, ymax, tip_floor](Point2 p) {
        double yb = invert_opening(hbar, p.y, ymax, tip_floor);
        return Point2{p.x * hbar(yb), yb};
    };
    m.jacobian = [hbar](Point2 p) {
        double hv = hbar(p.y), hp = hbar.deriv(p.y, 1), xt = p.x / hv;
        return std::array<double, 4>{1 / hv, -xt * hp / hv, 0, -1 / hv};
    };
    m.inverse_jacobian = [hbar](Point2 p) {
        double hv = hbar(p.y), hp = hbar.deriv(p.y, 1), xt = p.x / hv;
        return invert2({1 / hv, -xt * hp / hv, 0, -1 / hv});
    };
    return m;
}

// Boundary graph in characteristic coordinates via the boundary identity
// hbar(ybar) = xbar(h(y), y) (the cusp opens along the y-axis, ybar = y).
// Derivatives come from repeated differentiation of the sampled identity.
inline CuspGraph transformed_boundary_graph(const CuspGraph& h,
                                            const CoordinateMap& char_map,
                                            double ymax, int samples = 257) {
    auto vals = std::make_shared<std::vector<double>>(samples);
    double dy = ymax / (samples - 1);
    for (int i = 1; i < samples; ++i) {
        double y = i * dy;
        (*vals)[i] = char_map.forward({h(y), y}).x;
    }
    (*vals)[0] = 0.0;
    CuspGraph g;
    g.alpha_bar = h.alpha_bar;
    g.C_cusp = h.C_cusp;
    g.m1 = h.m1;
    g.eval = [vals, dy, samples](double t, int k) -> double {
        auto value = [&](double s) {
            double u = std::clamp(s / dy, 0.0, samples - 1.000001);
            int i = static_cast<int>(u);
            if (i >= samples - 1) i = samples - 2;
            double f = u - i;
            // cubic interpolation through 4 points where possible
            if (i >= 1 && i <= samples - 3) {
                double p0 = (*vals)[i - 1], p1 = (*vals)[i], p2 = (*vals)[i + 1], p3 = (*vals)[i + 2];
                double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
                double b = p0 - 2.5 * p1 + 2 * p2 - 0.5 * p3;
                double c = -0.5 * p0 + 0.5 * p2;
                return ((a * f + b) * f + c) * f + p1;
            }
            return (*vals)[i] * (1 - f) + (*vals)[i + 1] * f;
        };
        if (k == 0) return value(t);
        // repeated central differencing of the interpolant
        double hstep = std::max(dy, 1e-5);
        std::function<double(double, int)> d = [&](double s, int order) -> double {
            if (order == 0) return value(s);
            return (d(s + hstep, order - 1) - d(s - hstep, order - 1)) / (2 * hstep);
        };
        return d(t, k);
    };
    return g;
}

// --------------------------------------------------------------------------
// CuspDomain and hypothesis verification.

enum class Orientation { elliptic_cusp, hyperbolic_cusp };

struct Region {
    std::string name;
    int curvature_sign = 0; // sign of K inside
    std::function<bool(Point2)> inside;
};

struct CuspDomain {
    CuspGraph upper, lower; // |side| < h along the tangency axis
    Orientation orientation = Orientation::elliptic_cusp;
    double eps = 1.0;
    std::vector<Region> regions;

    // Standard four-region decomposition around two tangent curves. For the
    // elliptic orientation the cusp opens along the x-axis (curves y = +-h(x));
    // for the hyperbolic orientation along the y-axis (curves x = +-h(y)).
    static CuspDomain standard(const CuspGraph& h, Orientation orient, double eps) {
        CuspDomain d;
        d.upper = h;
        d.lower = h;
        d.orientation = orient;
        d.eps = eps;
        auto hv = [h](double t) { return h(std::abs(t)); };
        if (orient == Orientation::elliptic_cusp) {
            d.regions = {
                {"cusp_right", +1, [hv](Point2 p) { return p.x > 0 && std::abs(p.y) < hv(p.x); }},
                {"cusp_left", +1, [hv](Point2 p) { return p.x < 0 && std::abs(p.y) < hv(p.x); }},
                {"top", -1, [hv](Point2 p) { return p.y > hv(p.x); }},
                {"bottom", -1, [hv](Point2 p) { return p.y < -hv(p.x); }},
            };
        } else {
            d.regions = {
                {"cusp_up", -1, [hv](Point2 p) { return p.y > 0 && std::abs(p.x) < hv(p.y); }},
                {"cusp_down", -1, [hv](Point2 p) { return p.y < 0 && std::abs(p.x) < hv(p.y); }},
                {"right", +1, [hv](Point2 p) { return p.x > hv(p.y); }},
                {"left", +1, [hv](Point2 p) { return p.x < -hv(p.y); }},
            };
        }
        return d;
    }
};

struct HypothesisReport {
    int case_id = 1; // 1: K > 0 in the cusp, 2: K < 0 in the cusp
    CuspGraph::ConditionReport graph_conditions;
    bool conditions_pass = false;
    long long m0 = 0, m1 = 0, N = 0;
    long long m0_min = 0, m1_min = 0;
    long long m_max = -1; // largest admissible embedding smoothness, -1 if none
    bool exponents_pass = false;
    bool N_admissible = true;      // N <= m0 - 2 (largest vanishing order handled)
    bool alpha_special_case = false; // abar = 0 in case 2: transverse-intersection result
    bool alpha_out_of_range = false; // case 2 requires abar in (0, 1)
    bool pass() const { return conditions_pass && exponents_pass && N_admissible && !alpha_out_of_range; }
};

// Exponent thresholds of the main embedding theorem, exact integer arithmetic.
// case 1: m0 >= 3N+19, m1 >= 2N+6, m <= min(m1-1, m0-N-15)
// case 2: alpha = abar/(1+abar), m0 >= (1+alpha)/(1-2alpha)(6N+33)+4N+33,
//         m1 >= (6N+33)/(1-2alpha), m <= min(m1-1, (m0-(1+alpha)(5N+34))/(1+alpha)^2)
inline HypothesisReport validate_hypotheses(const CuspDomain& d, long long N, long long m0,
                                            long long m1,
                                            const std::string& alpha_bar_exact = "") {
    HypothesisReport r;
    r.case_id = d.orientation == Orientation::elliptic_cusp ? 1 : 2;
    r.m0 = m0;
    r.m1 = m1;
    r.N = N;
    bool hyp = r.case_id == 2;
    r.graph_conditions = CuspGraph(d.upper).check_conditions(1.0, hyp);
    r.conditions_pass = r.graph_conditions.all(hyp);
    r.N_admissible = N <= m0 - 2;

    if (r.case_id == 1) {
        r.m0_min = 3 * N + 19;
        r.m1_min = 2 * N + 6;
        r.exponents_pass = m0 >= r.m0_min && m1 >= r.m1_min;
        if (r.exponents_pass) r.m_max = std::min(m1 - 1, m0 - N - 15);
    } else {
        Rational abar = alpha_bar_exact.empty()
                            ? Rational{static_cast<long long>(std::llround(d.upper.alpha_bar * 1000000)), 1000000}
                            : parse_decimal(alpha_bar_exact);
        r.alpha_special_case = abar == Rational{0};
        if (!(Rational{0} <= abar) || !(abar < Rational{1})) r.alpha_out_of_range = true;
        if (!r.alpha_out_of_range && !r.alpha_special_case) {
            Rational alpha = abar / (Rational{1} + abar);
            Rational one{1};
            Rational denom = one - Rational{2} * alpha;
            Rational m0_min = (one + alpha) / denom * Rational{6 * N + 33} + Rational{4 * N + 33};
            Rational m1_min = Rational{6 * N + 33} / denom;
            r.m0_min = m0_min.ceil();
            r.m1_min = m1_min.ceil();
            r.exponents_pass = m0 >= r.m0_min && m1 >= r.m1_min;
            if (r.exponents_pass) {
                Rational num = Rational{m0} - (one + alpha) * Rational{5 * N + 34};
                Rational mbound = num / ((one + alpha) * (one + alpha));
                r.m_max = std::min(m1 - 1, mbound.floor());
            }
        } else if (r.alpha_special_case) {
            // abar = 0 reduces to the transverse-intersection result; report
            // the case-1 thresholds as the fallback.
            r.m0_min = 3 * N + 19;
            r.m1_min = 2 * N + 6;
            r.exponents_pass = m0 >= r.m0_min && m1 >= r.m1_min;
            if (r.exponents_pass) r.m_max = std::min(m1 - 1, m0 - N - 15);
        }
    }
    return r;
}

} // namespace darboux

#endif
