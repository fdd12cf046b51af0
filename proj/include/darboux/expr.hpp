#ifndef DARBOUX_EXPR_HPP
#define DARBOUX_EXPR_HPP

// Closed-form scalar expressions with exact symbolic derivatives.
// Nodes are immutable and shared; evaluation flattens the DAG to a tape.

#include <cmath>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "darboux/errors.hpp"

namespace darboux::ex {

enum class Op {
    Const, X, Y,
    Add, Sub, Mul, Div, Neg,
    Sin, Cos, Exp, Log, Sqrt,
    Pow,    // a^c, real exponent c, a > 0
    AbsPow  // |a|^c, real exponent c > 1 (cusp graphs with fractional sharpness)
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op;
    double c = 0.0; // constant value, or exponent for Pow/AbsPow
    NodePtr a, b;
};

inline NodePtr constant(double v) { return std::make_shared<Node>(Node{Op::Const, v, nullptr, nullptr}); }
inline NodePtr varx() { return std::make_shared<Node>(Node{Op::X, 0, nullptr, nullptr}); }
inline NodePtr vary() { return std::make_shared<Node>(Node{Op::Y, 0, nullptr, nullptr}); }

inline bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->c == v; }
inline bool is_const(const NodePtr& n) { return n->op == Op::Const; }

inline NodePtr add(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return constant(a->c + b->c);
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
    return std::make_shared<Node>(Node{Op::Add, 0, std::move(a), std::move(b)});
}
inline NodePtr sub(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return constant(a->c - b->c);
    if (is_const(b, 0)) return a;
    return std::make_shared<Node>(Node{Op::Sub, 0, std::move(a), std::move(b)});
}
inline NodePtr neg(NodePtr a) {
    if (is_const(a)) return constant(-a->c);
    return std::make_shared<Node>(Node{Op::Neg, 0, std::move(a), nullptr});
}
inline NodePtr mul(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return constant(a->c * b->c);
    if (is_const(a, 0) || is_const(b, 0)) return constant(0);
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
    return std::make_shared<Node>(Node{Op::Mul, 0, std::move(a), std::move(b)});
}
inline NodePtr div(NodePtr a, NodePtr b) {
    if (is_const(a, 0)) return constant(0);
    if (is_const(b, 1)) return a;
    if (is_const(a) && is_const(b)) return constant(a->c / b->c);
    return std::make_shared<Node>(Node{Op::Div, 0, std::move(a), std::move(b)});
}
inline NodePtr sin(NodePtr a) { return std::make_shared<Node>(Node{Op::Sin, 0, std::move(a), nullptr}); }
inline NodePtr cos(NodePtr a) { return std::make_shared<Node>(Node{Op::Cos, 0, std::move(a), nullptr}); }
inline NodePtr exp(NodePtr a) { return std::make_shared<Node>(Node{Op::Exp, 0, std::move(a), nullptr}); }
inline NodePtr log(NodePtr a) { return std::make_shared<Node>(Node{Op::Log, 0, std::move(a), nullptr}); }
inline NodePtr sqrt(NodePtr a) { return std::make_shared<Node>(Node{Op::Sqrt, 0, std::move(a), nullptr}); }
inline NodePtr pow(NodePtr a, double e) {
    if (e == 0.0) return constant(1);
    if (e == 1.0) return a;
    if (is_const(a)) return constant(std::pow(a->c, e));
    return std::make_shared<Node>(Node{Op::Pow, e, std::move(a), nullptr});
}
inline NodePtr abspow(NodePtr a, double e) {
    return std::make_shared<Node>(Node{Op::AbsPow, e, std::move(a), nullptr});
}

// Symbolic partial derivative, dir = 0 for x, 1 for y. Shared subtrees get
// differentiated once via the memo table.
inline NodePtr diff(const NodePtr& n, int dir,
                    std::unordered_map<const Node*, NodePtr>& memo) {
    auto it = memo.find(n.get());
    if (it != memo.end()) return it->second;
    NodePtr r;
    switch (n->op) {
        case Op::Const: r = constant(0); break;
        case Op::X: r = constant(dir == 0 ? 1 : 0); break;
        case Op::Y: r = constant(dir == 1 ? 1 : 0); break;
        case Op::Add: r = add(diff(n->a, dir, memo), diff(n->b, dir, memo)); break;
        case Op::Sub: r = sub(diff(n->a, dir, memo), diff(n->b, dir, memo)); break;
        case Op::Neg: r = neg(diff(n->a, dir, memo)); break;
        case Op::Mul:
            r = add(mul(diff(n->a, dir, memo), n->b), mul(n->a, diff(n->b, dir, memo)));
            break;
        case Op::Div: {
            // (a/b)' = a'/b - a b'/b^2
            NodePtr da = diff(n->a, dir, memo), db = diff(n->b, dir, memo);
            r = sub(div(da, n->b), div(mul(n->a, db), mul(n->b, n->b)));
            break;
        }
        case Op::Sin: r = mul(cos(n->a), diff(n->a, dir, memo)); break;
        case Op::Cos: r = neg(mul(sin(n->a), diff(n->a, dir, memo))); break;
        case Op::Exp: r = mul(std::make_shared<Node>(*n), diff(n->a, dir, memo)); break;
        case Op::Log: r = div(diff(n->a, dir, memo), n->a); break;
        case Op::Sqrt: {
            NodePtr self = std::make_shared<Node>(*n);
            r = div(diff(n->a, dir, memo), mul(constant(2), self));
            break;
        }
        case Op::Pow: // c * a^(c-1) * a'
            r = mul(constant(n->c), mul(pow(n->a, n->c - 1), diff(n->a, dir, memo)));
            break;
        case Op::AbsPow: // d|a|^c = c |a|^(c-2) a a'   (valid for c > 1)
            r = mul(constant(n->c),
                    mul(abspow(n->a, n->c - 2), mul(n->a, diff(n->a, dir, memo))));
            break;
    }
    memo.emplace(n.get(), r);
    return r;
}

inline NodePtr diff(const NodePtr& n, int dir) {
    std::unordered_map<const Node*, NodePtr> memo;
    return diff(n, dir, memo);
}

// Replace the coordinate leaves by expressions (exact composition).
inline NodePtr subst(const NodePtr& n, const NodePtr& fx, const NodePtr& fy,
                     std::unordered_map<const Node*, NodePtr>& memo) {
    auto it = memo.find(n.get());
    if (it != memo.end()) return it->second;
    NodePtr r;
    switch (n->op) {
        case Op::Const: r = n; break;
        case Op::X: r = fx; break;
        case Op::Y: r = fy; break;
        case Op::Add: r = add(subst(n->a, fx, fy, memo), subst(n->b, fx, fy, memo)); break;
        case Op::Sub: r = sub(subst(n->a, fx, fy, memo), subst(n->b, fx, fy, memo)); break;
        case Op::Mul: r = mul(subst(n->a, fx, fy, memo), subst(n->b, fx, fy, memo)); break;
        case Op::Div: r = div(subst(n->a, fx, fy, memo), subst(n->b, fx, fy, memo)); break;
        case Op::Neg: r = neg(subst(n->a, fx, fy, memo)); break;
        case Op::Sin: r = sin(subst(n->a, fx, fy, memo)); break;
        case Op::Cos: r = cos(subst(n->a, fx, fy, memo)); break;
        case Op::Exp: r = exp(subst(n->a, fx, fy, memo)); break;
        case Op::Log: r = log(subst(n->a, fx, fy, memo)); break;
        case Op::Sqrt: r = sqrt(subst(n->a, fx, fy, memo)); break;
        case Op::Pow: r = pow(subst(n->a, fx, fy, memo), n->c); break;
        case Op::AbsPow: r = abspow(subst(n->a, fx, fy, memo), n->c); break;
    }
    memo.emplace(n.get(), r);
    return r;
}

inline NodePtr subst(const NodePtr& n, const NodePtr& fx, const NodePtr& fy) {
    std::unordered_map<const Node*, NodePtr> memo;
    return subst(n, fx, fy, memo);
}

// Flattened evaluation tape (topological order of the DAG).
struct Tape {
    struct Ins {
        Op op;
        int a = -1, b = -1;
        double c = 0;
    };
    std::vector<Ins> ins;

    static Tape build(const NodePtr& root) {
        Tape t;
        std::unordered_map<const Node*, int> idx;
        build_rec(root, t, idx);
        return t;
    }

    double eval(double x, double y, std::vector<double>& scratch) const {
        scratch.resize(ins.size());
        for (std::size_t k = 0; k < ins.size(); ++k) {
            const Ins& e = ins[k];
            double va = e.a >= 0 ? scratch[e.a] : 0;
            double vb = e.b >= 0 ? scratch[e.b] : 0;
            double r = 0;
            switch (e.op) {
                case Op::Const: r = e.c; break;
                case Op::X: r = x; break;
                case Op::Y: r = y; break;
                case Op::Add: r = va + vb; break;
                case Op::Sub: r = va - vb; break;
                case Op::Mul: r = va * vb; break;
                case Op::Div: r = va / vb; break;
                case Op::Neg: r = -va; break;
                case Op::Sin: r = std::sin(va); break;
                case Op::Cos: r = std::cos(va); break;
                case Op::Exp: r = std::exp(va); break;
                case Op::Log: r = std::log(va); break;
                case Op::Sqrt: r = std::sqrt(va); break;
                case Op::Pow: r = std::pow(va, e.c); break;
                case Op::AbsPow: r = std::pow(std::abs(va), e.c); break;
            }
            scratch[k] = r;
        }
        return scratch.empty() ? 0.0 : scratch.back();
    }

private:
    static int build_rec(const NodePtr& n, Tape& t, std::unordered_map<const Node*, int>& idx) {
        auto it = idx.find(n.get());
        if (it != idx.end()) return it->second;
        int a = n->a ? build_rec(n->a, t, idx) : -1;
        int b = n->b ? build_rec(n->b, t, idx) : -1;
        t.ins.push_back({n->op, a, b, n->c});
        int k = static_cast<int>(t.ins.size()) - 1;
        idx.emplace(n.get(), k);
        return k;
    }
};

} // namespace darboux::ex

#endif
