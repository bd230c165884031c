#pragma once

// Immutable symbolic expression trees over named variables with exact
// rational constants. Construction goes through the factory functions below,
// which perform local constant folding only -- there is no general
// simplifier; equality of values is decided by normal forms or sampling.

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adjflow/rational.hpp"

namespace adjflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExprKind { Constant, ConstSym, Var, Add, Mul, Neg, Div, Pow, Call };

class ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

class ExprNode {
public:
    ExprKind kind;
    Rat value;          // Constant
    double dvalue = 0;  // cached double for Constant / ConstSym
    std::string name;   // Var / ConstSym / Call function name
    std::vector<Expr> kids;

    ExprNode(ExprKind k, Rat v, double dv, std::string n, std::vector<Expr> c)
        : kind(k), value(std::move(v)), dvalue(dv), name(std::move(n)), kids(std::move(c)) {}
};

inline const std::set<std::string>& builtin_functions() {
    static const std::set<std::string> fns = {"exp", "ln", "sin", "cos", "sqrt"};
    return fns;
}

inline bool is_constant_node(const Expr& e) { return e->kind == ExprKind::Constant; }
inline bool is_constant_value(const Expr& e, long v) {
    return e->kind == ExprKind::Constant && e->value == v;
}

inline Expr constant(Rat v) {
    double d = rat_to_double(v);
    return std::make_shared<const ExprNode>(ExprKind::Constant, std::move(v), d, "",
                                            std::vector<Expr>{});
}
inline Expr constant(long v) { return constant(Rat(v)); }

inline Expr const_symbol(std::string name, double value) {
    return std::make_shared<const ExprNode>(ExprKind::ConstSym, Rat(0), value, std::move(name),
                                            std::vector<Expr>{});
}

inline Expr variable(std::string name) {
    if (name.empty()) throw Error("variable name must be nonempty");
    return std::make_shared<const ExprNode>(ExprKind::Var, Rat(0), 0.0, std::move(name),
                                            std::vector<Expr>{});
}

inline Expr make_node(ExprKind k, std::vector<Expr> kids, std::string name = "") {
    return std::make_shared<const ExprNode>(k, Rat(0), 0.0, std::move(name), std::move(kids));
}

inline Expr mul(Expr a, Expr b);

inline Expr neg(Expr a) {
    if (a->kind == ExprKind::Constant) return constant(Rat(-a->value));
    if (a->kind == ExprKind::Neg) return a->kids[0];
    // -(c*e) -> (-c)*e keeps constants in the leading slot.
    if (a->kind == ExprKind::Mul && a->kids[0]->kind == ExprKind::Constant)
        return mul(constant(Rat(-a->kids[0]->value)), a->kids[1]);
    return make_node(ExprKind::Neg, {std::move(a)});
}

inline Expr add(Expr a, Expr b) {
    if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
        return constant(Rat(a->value + b->value));
    if (is_constant_value(a, 0)) return b;
    if (is_constant_value(b, 0)) return a;
    // fold constants one level: c1 + (c2 + e) -> (c1+c2) + e
    if (a->kind == ExprKind::Constant && b->kind == ExprKind::Add &&
        b->kids[0]->kind == ExprKind::Constant)
        return add(constant(Rat(a->value + b->kids[0]->value)), b->kids[1]);
    return make_node(ExprKind::Add, {std::move(a), std::move(b)});
}

inline Expr sub(Expr a, Expr b) { return add(std::move(a), neg(std::move(b))); }

inline Expr mul(Expr a, Expr b) {
    if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
        return constant(Rat(a->value * b->value));
    if (is_constant_value(a, 0) || is_constant_value(b, 0)) return constant(0L);
    if (is_constant_value(a, 1)) return b;
    if (is_constant_value(b, 1)) return a;
    if (b->kind == ExprKind::Constant) std::swap(a, b);  // constant first
    if (a->kind == ExprKind::Constant && a->value == -1) return neg(std::move(b));
    if (a->kind == ExprKind::Constant) {
        if (b->kind == ExprKind::Mul && b->kids[0]->kind == ExprKind::Constant)
            return mul(constant(Rat(a->value * b->kids[0]->value)), b->kids[1]);
        if (b->kind == ExprKind::Neg) return mul(constant(Rat(-a->value)), b->kids[0]);
    }
    return make_node(ExprKind::Mul, {std::move(a), std::move(b)});
}

inline Expr divide(Expr a, Expr b) {
    if (b->kind == ExprKind::Constant) {
        if (b->value == 0) throw Error("division by zero constant");
        if (a->kind == ExprKind::Constant) return constant(Rat(a->value / b->value));
        return mul(constant(Rat(Rat(1) / b->value)), std::move(a));
    }
    if (is_constant_value(a, 0)) return constant(0L);
    return make_node(ExprKind::Div, {std::move(a), std::move(b)});
}

inline Expr power(Expr base, Expr exponent) {
    if (exponent->kind == ExprKind::Constant) {
        const Rat& e = exponent->value;
        if (e == 0) return constant(1L);
        if (e == 1) return base;
        if (base->kind == ExprKind::Constant && rat_is_integer(e)) {
            auto k = rat_to_long(e);
            if (k && *k > -64 && *k < 64) {
                auto v = rat_pow(base->value, *k);
                if (v) return constant(*v);
            }
        }
    }
    return make_node(ExprKind::Pow, {std::move(base), std::move(exponent)});
}
inline Expr power(Expr base, long e) { return power(std::move(base), constant(e)); }

inline Expr call(const std::string& fn, Expr arg) {
    if (!builtin_functions().count(fn)) throw Error("unknown function: " + fn);
    return make_node(ExprKind::Call, {std::move(arg)}, fn);
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind || a->name != b->name || a->kids.size() != b->kids.size()) return false;
    if (a->kind == ExprKind::Constant && a->value != b->value) return false;
    if (a->kind == ExprKind::ConstSym && a->dvalue != b->dvalue) return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!structurally_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

inline void free_vars(const Expr& e, std::set<std::string>& out) {
    if (e->kind == ExprKind::Var) out.insert(e->name);
    for (const auto& k : e->kids) free_vars(k, out);
}
inline std::set<std::string> free_vars(const Expr& e) {
    std::set<std::string> out;
    free_vars(e, out);
    return out;
}

inline void const_symbols(const Expr& e, std::map<std::string, double>& out) {
    if (e->kind == ExprKind::ConstSym) out[e->name] = e->dvalue;
    for (const auto& k : e->kids) const_symbols(k, out);
}

// ---------------------------------------------------------------------------
// Printing. Output re-parses to a structurally equal tree.

namespace detail {

inline int print_prec(const Expr& e) {
    switch (e->kind) {
        case ExprKind::Add: return 10;
        case ExprKind::Neg: return 15;
        case ExprKind::Mul:
        case ExprKind::Div: return 20;
        case ExprKind::Pow: return 30;
        case ExprKind::Constant: return e->value < 0 ? 15 : 100;
        default: return 100;
    }
}

inline void print_expr(std::ostream& os, const Expr& e);

inline void print_child(std::ostream& os, const Expr& e, int min_prec) {
    if (print_prec(e) < min_prec) {
        os << '(';
        print_expr(os, e);
        os << ')';
    } else {
        print_expr(os, e);
    }
}

inline void print_expr(std::ostream& os, const Expr& e) {
    switch (e->kind) {
        case ExprKind::Constant: os << rat_to_string(e->value); break;
        case ExprKind::ConstSym:
        case ExprKind::Var: os << e->name; break;
        case ExprKind::Add: {
            print_child(os, e->kids[0], 10);
            const Expr& rhs = e->kids[1];
            if (rhs->kind == ExprKind::Neg) {
                os << " - ";
                print_child(os, rhs->kids[0], 11);
            } else if (rhs->kind == ExprKind::Constant && rhs->value < 0) {
                os << " - ";
                print_child(os, constant(Rat(-rhs->value)), 11);
            } else if (rhs->kind == ExprKind::Mul && rhs->kids[0]->kind == ExprKind::Constant &&
                       rhs->kids[0]->value < 0) {
                os << " - ";
                print_child(os, mul(constant(Rat(-rhs->kids[0]->value)), rhs->kids[1]), 11);
            } else {
                os << " + ";
                print_child(os, rhs, 11);
            }
            break;
        }
        case ExprKind::Neg:
            os << '-';
            // unary minus binds tighter than * and / but looser than ^
            print_child(os, e->kids[0], 26);
            break;
        case ExprKind::Mul:
            print_child(os, e->kids[0], 20);
            os << '*';
            print_child(os, e->kids[1], 21);
            break;
        case ExprKind::Div:
            print_child(os, e->kids[0], 20);
            os << '/';
            print_child(os, e->kids[1], 21);
            break;
        case ExprKind::Pow:
            print_child(os, e->kids[0], 31);
            os << '^';
            print_child(os, e->kids[1], 30);
            break;
        case ExprKind::Call:
            os << e->name << '(';
            print_expr(os, e->kids[0]);
            os << ')';
            break;
    }
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
    std::ostringstream os;
    detail::print_expr(os, e);
    return os.str();
}

// ---------------------------------------------------------------------------
// Differentiation. Standard rules, local constant folding only.

inline Expr diff(const Expr& e, const std::string& v) {
    switch (e->kind) {
        case ExprKind::Constant:
        case ExprKind::ConstSym: return constant(0L);
        case ExprKind::Var: return constant(e->name == v ? 1L : 0L);
        case ExprKind::Add: return add(diff(e->kids[0], v), diff(e->kids[1], v));
        case ExprKind::Neg: return neg(diff(e->kids[0], v));
        case ExprKind::Mul:
            return add(mul(diff(e->kids[0], v), e->kids[1]), mul(e->kids[0], diff(e->kids[1], v)));
        case ExprKind::Div: {
            const Expr &num = e->kids[0], &den = e->kids[1];
            return divide(sub(mul(diff(num, v), den), mul(num, diff(den, v))), power(den, 2));
        }
        case ExprKind::Pow: {
            const Expr &base = e->kids[0], &expo = e->kids[1];
            if (free_vars(expo).empty()) {
                // e * b^(e-1) * b'
                return mul(mul(expo, power(base, sub(expo, constant(1L)))), diff(base, v));
            }
            // b^e * (e' ln b + e b'/b)
            return mul(e, add(mul(diff(expo, v), call("ln", base)),
                              mul(expo, divide(diff(base, v), base))));
        }
        case ExprKind::Call: {
            const Expr& a = e->kids[0];
            Expr da = diff(a, v);
            if (e->name == "exp") return mul(call("exp", a), da);
            if (e->name == "ln") return divide(da, a);
            if (e->name == "sin") return mul(call("cos", a), da);
            if (e->name == "cos") return mul(neg(call("sin", a)), da);
            if (e->name == "sqrt") return divide(da, mul(constant(2L), call("sqrt", a)));
            throw Error("diff: unknown function " + e->name);
        }
    }
    throw Error("diff: bad node");
}

// Simultaneous substitution; every free variable of e must be bound.
inline Expr substitute(const Expr& e, const std::map<std::string, Expr>& binding) {
    switch (e->kind) {
        case ExprKind::Constant:
        case ExprKind::ConstSym: return e;
        case ExprKind::Var: {
            auto it = binding.find(e->name);
            if (it == binding.end()) throw Error("substitute: unbound variable " + e->name);
            return it->second;
        }
        case ExprKind::Add: return add(substitute(e->kids[0], binding), substitute(e->kids[1], binding));
        case ExprKind::Neg: return neg(substitute(e->kids[0], binding));
        case ExprKind::Mul: return mul(substitute(e->kids[0], binding), substitute(e->kids[1], binding));
        case ExprKind::Div:
            return divide(substitute(e->kids[0], binding), substitute(e->kids[1], binding));
        case ExprKind::Pow:
            return power(substitute(e->kids[0], binding), substitute(e->kids[1], binding));
        case ExprKind::Call: return call(e->name, substitute(e->kids[0], binding));
    }
    throw Error("substitute: bad node");
}

// Identity substitution helper: binds each variable in `vars` to itself.
inline std::map<std::string, Expr> identity_binding(const std::vector<std::string>& vars) {
    std::map<std::string, Expr> b;
    for (const auto& v : vars) b.emplace(v, variable(v));
    return b;
}

// ---------------------------------------------------------------------------
// Evaluation.

inline int var_index(const std::vector<std::string>& vars, const std::string& name) {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) return static_cast<int>(i);
    return -1;
}

// Floating evaluation. Division by zero and domain errors surface as
// non-finite values, which sampling treats as skipped samples.
inline double eval_double(const Expr& e, const std::vector<std::string>& vars,
                          const std::vector<double>& point) {
    switch (e->kind) {
        case ExprKind::Constant:
        case ExprKind::ConstSym: return e->dvalue;
        case ExprKind::Var: {
            int i = var_index(vars, e->name);
            if (i < 0) throw Error("eval: undeclared variable " + e->name);
            return point[static_cast<std::size_t>(i)];
        }
        case ExprKind::Add: return eval_double(e->kids[0], vars, point) + eval_double(e->kids[1], vars, point);
        case ExprKind::Neg: return -eval_double(e->kids[0], vars, point);
        case ExprKind::Mul: return eval_double(e->kids[0], vars, point) * eval_double(e->kids[1], vars, point);
        case ExprKind::Div: return eval_double(e->kids[0], vars, point) / eval_double(e->kids[1], vars, point);
        case ExprKind::Pow: return std::pow(eval_double(e->kids[0], vars, point),
                                            eval_double(e->kids[1], vars, point));
        case ExprKind::Call: {
            double a = eval_double(e->kids[0], vars, point);
            if (e->name == "exp") return std::exp(a);
            if (e->name == "ln") return std::log(a);
            if (e->name == "sin") return std::sin(a);
            if (e->name == "cos") return std::cos(a);
            if (e->name == "sqrt") return std::sqrt(a);
            throw Error("eval: unknown function " + e->name);
        }
    }
    throw Error("eval: bad node");
}

// Exact evaluation; nullopt when the value is not an exactly representable
// rational (calls, named constants, poles, inexact roots).
inline std::optional<Rat> eval_exact(const Expr& e, const std::vector<std::string>& vars,
                                     const std::vector<Rat>& point) {
    switch (e->kind) {
        case ExprKind::Constant: return e->value;
        case ExprKind::ConstSym: return std::nullopt;
        case ExprKind::Var: {
            int i = var_index(vars, e->name);
            if (i < 0) throw Error("eval: undeclared variable " + e->name);
            return point[static_cast<std::size_t>(i)];
        }
        case ExprKind::Add: {
            auto a = eval_exact(e->kids[0], vars, point), b = eval_exact(e->kids[1], vars, point);
            if (!a || !b) return std::nullopt;
            return Rat(*a + *b);
        }
        case ExprKind::Neg: {
            auto a = eval_exact(e->kids[0], vars, point);
            if (!a) return std::nullopt;
            return Rat(-*a);
        }
        case ExprKind::Mul: {
            auto a = eval_exact(e->kids[0], vars, point), b = eval_exact(e->kids[1], vars, point);
            if (!a || !b) return std::nullopt;
            return Rat(*a * *b);
        }
        case ExprKind::Div: {
            auto a = eval_exact(e->kids[0], vars, point), b = eval_exact(e->kids[1], vars, point);
            if (!a || !b || *b == 0) return std::nullopt;
            return Rat(*a / *b);
        }
        case ExprKind::Pow: {
            auto b = eval_exact(e->kids[0], vars, point), x = eval_exact(e->kids[1], vars, point);
            if (!b || !x) return std::nullopt;
            if (rat_is_integer(*x)) {
                auto k = rat_to_long(*x);
                if (!k) return std::nullopt;
                return rat_pow(*b, *k);
            }
            // rational exponent p/q: exact only for perfect q-th powers
            if (!x->get_den().fits_ulong_p() || !x->get_num().fits_slong_p()) return std::nullopt;
            auto root = rat_root(*b, x->get_den().get_ui());
            if (!root) return std::nullopt;
            return rat_pow(*root, x->get_num().get_si());
        }
        case ExprKind::Call: return std::nullopt;
    }
    throw Error("eval: bad node");
}

// ---------------------------------------------------------------------------
// Syntactic function class: polynomial / rational / general. Named constants
// count as coefficients; calls and non-integer exponents are general.

enum class ExprClass { Polynomial, Rational, General };

inline const char* to_string(ExprClass c) {
    switch (c) {
        case ExprClass::Polynomial: return "polynomial";
        case ExprClass::Rational: return "rational";
        case ExprClass::General: return "general";
    }
    return "?";
}

inline ExprClass classify(const Expr& e) {
    auto worst = [](ExprClass a, ExprClass b) { return a > b ? a : b; };
    switch (e->kind) {
        case ExprKind::Constant:
        case ExprKind::ConstSym:
        case ExprKind::Var: return ExprClass::Polynomial;
        case ExprKind::Add:
        case ExprKind::Mul:
            return worst(classify(e->kids[0]), classify(e->kids[1]));
        case ExprKind::Neg: return classify(e->kids[0]);
        case ExprKind::Div:
            return worst(ExprClass::Rational, worst(classify(e->kids[0]), classify(e->kids[1])));
        case ExprKind::Pow: {
            const Expr& x = e->kids[1];
            if (x->kind == ExprKind::Constant && rat_is_integer(x->value)) {
                ExprClass base = classify(e->kids[0]);
                if (x->value >= 0) return base;
                return worst(ExprClass::Rational, base);
            }
            return ExprClass::General;
        }
        case ExprKind::Call: return ExprClass::General;
    }
    return ExprClass::General;
}

}  // namespace adjflow
