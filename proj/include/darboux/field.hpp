#ifndef DARBOUX_FIELD_HPP
#define DARBOUX_FIELD_HPP

// AnalyticField: a scalar field with exact partial derivatives up to a declared
// order. Jet2: truncated bivariate Taylor polynomial with exact coefficient ops.

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "darboux/expr.hpp"

namespace darboux {

struct Point2 {
    double x = 0, y = 0;
};

class AnalyticField {
public:
    AnalyticField() : AnalyticField(ex::constant(0), kDefaultOrder) {}
    explicit AnalyticField(ex::NodePtr root, int max_order = kDefaultOrder)
        : state_(std::make_shared<State>(std::move(root), max_order)) {}

    static AnalyticField x() { return AnalyticField(ex::varx()); }
    static AnalyticField y() { return AnalyticField(ex::vary()); }
    static AnalyticField constant(double v) { return AnalyticField(ex::constant(v)); }

    double operator()(double px, double py) const {
        std::vector<double> scratch;
        return state_->tape().eval(px, py, scratch);
    }
    double operator()(Point2 p) const { return (*this)(p.x, p.y); }

    // Evaluate on many points with one tape traversal state per point.
    std::vector<double> eval_many(const std::vector<Point2>& pts) const {
        const ex::Tape& t = state_->tape();
        std::vector<double> out(pts.size()), scratch;
        for (std::size_t i = 0; i < pts.size(); ++i)
            out[i] = t.eval(pts[i].x, pts[i].y, scratch);
        return out;
    }

    int max_order() const { return state_->max_order; }

    // Exact partial derivative d^{ix+iy} / dx^{ix} dy^{iy}.
    AnalyticField derivative(int ix, int iy) const {
        if (ix < 0 || iy < 0) throw error("negative derivative order");
        if (ix + iy > state_->max_order)
            throw RegularityBudgetExceeded("derivative order " + std::to_string(ix + iy) +
                                           " exceeds declared budget " +
                                           std::to_string(state_->max_order));
        return AnalyticField(state_->derivative(ix, iy), state_->max_order - ix - iy);
    }
    AnalyticField dx() const { return derivative(1, 0); }
    AnalyticField dy() const { return derivative(0, 1); }

    // Exact composition with expression substitutes for (x, y).
    AnalyticField substituted(const AnalyticField& fx, const AnalyticField& fy) const {
        return AnalyticField(ex::subst(state_->root, fx.state_->root, fy.state_->root),
                             state_->max_order);
    }
    // Affine reparametrization x -> ox + sx*x, y -> oy + sy*y.
    AnalyticField affine(double ox, double sx, double oy, double sy) const {
        ex::NodePtr fx = ex::add(ex::constant(ox), ex::mul(ex::constant(sx), ex::varx()));
        ex::NodePtr fy = ex::add(ex::constant(oy), ex::mul(ex::constant(sy), ex::vary()));
        return AnalyticField(ex::subst(state_->root, fx, fy), state_->max_order);
    }

    ex::NodePtr root() const { return state_->root; }

    friend AnalyticField operator+(const AnalyticField& a, const AnalyticField& b) {
        return AnalyticField(ex::add(a.root(), b.root()), std::min(a.max_order(), b.max_order()));
    }
    friend AnalyticField operator-(const AnalyticField& a, const AnalyticField& b) {
        return AnalyticField(ex::sub(a.root(), b.root()), std::min(a.max_order(), b.max_order()));
    }
    friend AnalyticField operator*(const AnalyticField& a, const AnalyticField& b) {
        return AnalyticField(ex::mul(a.root(), b.root()), std::min(a.max_order(), b.max_order()));
    }
    friend AnalyticField operator/(const AnalyticField& a, const AnalyticField& b) {
        return AnalyticField(ex::div(a.root(), b.root()), std::min(a.max_order(), b.max_order()));
    }
    friend AnalyticField operator-(const AnalyticField& a) {
        return AnalyticField(ex::neg(a.root()), a.max_order());
    }
    friend AnalyticField operator*(double s, const AnalyticField& a) {
        return AnalyticField(ex::mul(ex::constant(s), a.root()), a.max_order());
    }
    friend AnalyticField operator+(const AnalyticField& a, double s) {
        return AnalyticField(ex::add(a.root(), ex::constant(s)), a.max_order());
    }
    friend AnalyticField operator-(const AnalyticField& a, double s) {
        return AnalyticField(ex::sub(a.root(), ex::constant(s)), a.max_order());
    }

    static constexpr int kDefaultOrder = 24;

private:
    struct State {
        ex::NodePtr root;
        int max_order;
        State(ex::NodePtr r, int m) : root(std::move(r)), max_order(m) {}

        const ex::Tape& tape() {
            std::lock_guard<std::mutex> lock(mu);
            if (!tape_)
                tape_ = std::make_unique<ex::Tape>(ex::Tape::build(root));
            return *tape_;
        }
        ex::NodePtr derivative(int ix, int iy) {
            std::lock_guard<std::mutex> lock(mu);
            auto key = std::make_pair(ix, iy);
            auto it = dcache.find(key);
            if (it != dcache.end()) return it->second;
            ex::NodePtr d = root;
            for (int k = 0; k < ix; ++k) d = ex::diff(d, 0);
            for (int k = 0; k < iy; ++k) d = ex::diff(d, 1);
            dcache.emplace(key, d);
            return d;
        }

    private:
        std::mutex mu;
        std::unique_ptr<ex::Tape> tape_;
        std::map<std::pair<int, int>, ex::NodePtr> dcache;
    };
    std::shared_ptr<State> state_;
};

inline AnalyticField sinf2(const AnalyticField& a) { return AnalyticField(ex::sin(a.root()), a.max_order()); }
inline AnalyticField cosf2(const AnalyticField& a) { return AnalyticField(ex::cos(a.root()), a.max_order()); }
inline AnalyticField expf2(const AnalyticField& a) { return AnalyticField(ex::exp(a.root()), a.max_order()); }
inline AnalyticField logf2(const AnalyticField& a) { return AnalyticField(ex::log(a.root()), a.max_order()); }
inline AnalyticField sqrtf2(const AnalyticField& a) { return AnalyticField(ex::sqrt(a.root()), a.max_order()); }
inline AnalyticField powf2(const AnalyticField& a, double e) { return AnalyticField(ex::pow(a.root(), e), a.max_order()); }
inline AnalyticField abspowf2(const AnalyticField& a, double e) { return AnalyticField(ex::abspow(a.root(), e), a.max_order()); }

// Truncated bivariate Taylor polynomial around a center point.
// Coefficients are stored for the monomials (x - cx)^i (y - cy)^j, i + j <= order.
class Jet2 {
public:
    Jet2() : Jet2(0, {0, 0}) {}
    Jet2(int order, Point2 center)
        : order_(order), center_(center), c_((order + 1) * (order + 1), 0.0) {
        if (order < 0) throw error("Jet2: negative order");
    }

    int order() const { return order_; }
    Point2 center() const { return center_; }

    double coeff(int i, int j) const {
        if (i < 0 || j < 0 || i + j > order_) return 0.0;
        return c_[idx(i, j)];
    }
    void set_coeff(int i, int j, double v) {
        if (i < 0 || j < 0 || i + j > order_) throw error("Jet2: coefficient out of range");
        c_[idx(i, j)] = v;
    }

    double eval(double x, double y) const {
        double dx = x - center_.x, dy = y - center_.y;
        // Horner in y then x
        double r = 0;
        for (int i = order_; i >= 0; --i) {
            double py = 0;
            for (int j = order_ - i; j >= 0; --j) py = py * dy + coeff(i, j);
            r = r * dx + py;
        }
        return r;
    }

    // Formal derivative (exact coefficient shift).
    Jet2 derivative(int ix, int iy) const {
        Jet2 d(std::max(order_ - ix - iy, 0), center_);
        for (int i = 0; i + ix <= order_; ++i)
            for (int j = 0; i + ix + j + iy <= order_; ++j) {
                double f = 1;
                for (int k = 0; k < ix; ++k) f *= (i + ix - k);
                for (int k = 0; k < iy; ++k) f *= (j + iy - k);
                if (i + j <= d.order_) d.c_[d.idx(i, j)] = f * coeff(i + ix, j + iy);
            }
        return d;
    }

    Jet2 truncated(int order) const {
        Jet2 r(order, center_);
        for (int i = 0; i <= order; ++i)
            for (int j = 0; i + j <= order; ++j) r.set_coeff(i, j, coeff(i, j));
        return r;
    }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        Jet2 r(std::max(a.order_, b.order_), a.center_);
        for (int i = 0; i <= r.order_; ++i)
            for (int j = 0; i + j <= r.order_; ++j)
                r.set_coeff(i, j, a.coeff(i, j) + b.coeff(i, j));
        return r;
    }
    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        Jet2 r(std::max(a.order_, b.order_), a.center_);
        for (int i = 0; i <= r.order_; ++i)
            for (int j = 0; i + j <= r.order_; ++j)
                r.set_coeff(i, j, a.coeff(i, j) - b.coeff(i, j));
        return r;
    }
    friend Jet2 operator*(double s, const Jet2& a) {
        Jet2 r = a;
        for (auto& v : r.c_) v *= s;
        return r;
    }
    // Product truncated at max(orders).
    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        int ord = std::max(a.order_, b.order_);
        Jet2 r(ord, a.center_);
        for (int i1 = 0; i1 <= a.order_; ++i1)
            for (int j1 = 0; i1 + j1 <= a.order_; ++j1) {
                double ca = a.coeff(i1, j1);
                if (ca == 0) continue;
                for (int i2 = 0; i1 + i2 <= ord; ++i2)
                    for (int j2 = 0; i1 + j1 + i2 + j2 <= ord; ++j2) {
                        double cb = b.coeff(i2, j2);
                        if (cb == 0) continue;
                        r.c_[r.idx(i1 + i2, j1 + j2)] += ca * cb;
                    }
            }
        return r;
    }

    // Power-series reciprocal; requires nonzero constant term.
    Jet2 reciprocal() const {
        double a0 = coeff(0, 0);
        if (a0 == 0) throw DegenerateMetric("Jet2::reciprocal: vanishing constant term");
        Jet2 r(order_, center_);
        r.set_coeff(0, 0, 1.0 / a0);
        // iterate r_{k+1} = r_k (2 - a r_k); quadratic convergence in truncation degree
        for (int it = 0; it < order_ + 2; ++it) {
            Jet2 t = (*this) * r;
            Jet2 two(order_, center_);
            two.set_coeff(0, 0, 2.0);
            r = r * (two - t);
        }
        return r;
    }

    // Lift to an expression field (exact polynomial identity).
    AnalyticField to_field() const {
        using namespace ex;
        NodePtr dx = sub(varx(), constant(center_.x));
        NodePtr dy = sub(vary(), constant(center_.y));
        NodePtr s = constant(0);
        for (int i = 0; i <= order_; ++i)
            for (int j = 0; i + j <= order_; ++j) {
                double cij = coeff(i, j);
                if (cij == 0) continue;
                NodePtr m = constant(cij);
                for (int k = 0; k < i; ++k) m = mul(m, dx);
                for (int k = 0; k < j; ++k) m = mul(m, dy);
                s = add(s, m);
            }
        return AnalyticField(s);
    }

private:
    int idx(int i, int j) const { return i * (order_ + 1) + j; }
    int order_;
    Point2 center_;
    std::vector<double> c_;
};

// Exact Taylor expansion of an analytic field (coefficients = derivs / i! j!).
inline Jet2 taylor_expand(const AnalyticField& f, Point2 center, int order) {
    Jet2 jet(order, center);
    double fact_i = 1;
    for (int i = 0; i <= order; ++i) {
        if (i > 0) fact_i *= i;
        double fact_j = 1;
        for (int j = 0; i + j <= order; ++j) {
            if (j > 0) fact_j *= j;
            jet.set_coeff(i, j, f.derivative(i, j)(center) / (fact_i * fact_j));
        }
    }
    return jet;
}

} // namespace darboux

#endif
