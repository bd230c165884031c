#pragma once

// Multivariate polynomial normal form with exact rational coefficients.
//
// Terms live in a map keyed by exponent vectors under graded lexicographic
// order, with no zero coefficients stored, so two PolyNF values are equal as
// polynomials iff their term maps are identical. This is the exact-zero
// oracle: an expression is identically zero iff its normal form is empty.
//
// Named constants (opaque irrational coefficients) are appended to the
// variable universe and treated as polynomial symbols, which keeps identities
// involving them exact.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adjflow/expr.hpp"

namespace adjflow {

struct GrlexLess {
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
        int da = std::accumulate(a.begin(), a.end(), 0);
        int db = std::accumulate(b.begin(), b.end(), 0);
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

class PolyNF {
public:
    using TermMap = std::map<std::vector<int>, Rat, GrlexLess>;

    explicit PolyNF(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    static PolyNF from_constant(std::vector<std::string> vars, const Rat& c) {
        PolyNF p(std::move(vars));
        p.add_term(std::vector<int>(p.nvars(), 0), c);
        return p;
    }

    static PolyNF from_variable(std::vector<std::string> vars, int index) {
        PolyNF p(std::move(vars));
        std::vector<int> e(p.nvars(), 0);
        e[static_cast<std::size_t>(index)] = 1;
        p.add_term(e, Rat(1));
        return p;
    }

    int nvars() const { return static_cast<int>(vars_.size()); }
    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        if (terms_.empty()) return true;
        return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0;
    }

    Rat constant_value() const {
        if (terms_.empty()) return Rat(0);
        return terms_.begin()->second;
    }

    int degree() const {
        if (terms_.empty()) return -1;
        return total_degree(terms_.rbegin()->first);
    }

    void add_term(const std::vector<int>& expo, const Rat& coeff) {
        if (coeff == 0) return;
        auto it = terms_.find(expo);
        if (it == terms_.end()) {
            terms_.emplace(expo, coeff);
        } else {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    PolyNF operator-() const {
        PolyNF out(vars_);
        for (const auto& [e, c] : terms_) out.terms_.emplace(e, Rat(-c));
        return out;
    }

    PolyNF operator+(const PolyNF& o) const {
        PolyNF out = *this;
        for (const auto& [e, c] : o.terms_) out.add_term(e, c);
        return out;
    }

    PolyNF operator-(const PolyNF& o) const { return *this + (-o); }

    PolyNF operator*(const PolyNF& o) const {
        PolyNF out(vars_);
        for (const auto& [ea, ca] : terms_) {
            for (const auto& [eb, cb] : o.terms_) {
                std::vector<int> e(ea);
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                out.add_term(e, Rat(ca * cb));
            }
        }
        return out;
    }

    PolyNF scaled(const Rat& c) const {
        PolyNF out(vars_);
        if (c == 0) return out;
        for (const auto& [e, k] : terms_) out.terms_.emplace(e, Rat(k * c));
        return out;
    }

    PolyNF pow(unsigned k) const {
        PolyNF acc = from_constant(vars_, Rat(1));
        PolyNF base = *this;
        while (k > 0) {
            if (k & 1u) acc = acc * base;
            base = (k >>= 1u) ? base * base : base;
        }
        return acc;
    }

    PolyNF derivative(int var) const {
        PolyNF out(vars_);
        auto v = static_cast<std::size_t>(var);
        for (const auto& [e, c] : terms_) {
            if (e[v] == 0) continue;
            std::vector<int> d(e);
            d[v] -= 1;
            out.add_term(d, Rat(c * e[v]));
        }
        return out;
    }

    bool operator==(const PolyNF& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }

    // Exact division; nullopt when the divisor does not divide exactly.
    std::optional<PolyNF> divide_exact(const PolyNF& divisor) const {
        if (divisor.is_zero()) return std::nullopt;
        PolyNF rem = *this;
        PolyNF quot(vars_);
        const auto& dlead = *divisor.terms_.rbegin();
        while (!rem.is_zero()) {
            const auto& rlead = *rem.terms_.rbegin();
            std::vector<int> e(rlead.first);
            for (std::size_t i = 0; i < e.size(); ++i) {
                e[i] -= dlead.first[i];
                if (e[i] < 0) return std::nullopt;
            }
            Rat c = rlead.second / dlead.second;
            PolyNF t(vars_);
            t.add_term(e, c);
            quot.add_term(e, c);
            rem = rem - t * divisor;
        }
        return quot;
    }

    Rat eval_exact(const std::vector<Rat>& point) const {
        Rat acc(0);
        for (const auto& [e, c] : terms_) {
            Rat term = c;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                term *= *rat_pow(point[i], e[i]);
            }
            acc += term;
        }
        return acc;
    }

    double eval_double(const std::vector<double>& point) const {
        double acc = 0;
        for (const auto& [e, c] : terms_) {
            double term = rat_to_double(c);
            for (std::size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k) term *= point[i];
            acc += term;
        }
        return acc;
    }

    Expr to_expr() const {
        Expr acc = constant(0L);
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            Expr term = constant(it->second);
            for (std::size_t i = 0; i < it->first.size(); ++i) {
                if (it->first[i] == 0) continue;
                term = mul(term, power(variable(vars_[i]), it->first[i]));
            }
            acc = add(acc, term);
        }
        return acc;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            Rat c = it->second;
            if (!first) {
                os << (c < 0 ? " - " : " + ");
                if (c < 0) c = -c;
            } else if (c < 0) {
                os << '-';
                c = -c;
            }
            first = false;
            bool has_vars = total_degree(it->first) > 0;
            if (!has_vars || c != 1) {
                os << rat_to_string(c);
                if (has_vars) os << '*';
            }
            bool firstv = true;
            for (std::size_t i = 0; i < it->first.size(); ++i) {
                if (it->first[i] == 0) continue;
                if (!firstv) os << '*';
                firstv = false;
                os << vars_[i];
                if (it->first[i] > 1) os << '^' << it->first[i];
            }
        }
        return os.str();
    }

private:
    static int total_degree(const std::vector<int>& e) {
        return std::accumulate(e.begin(), e.end(), 0);
    }

    std::vector<std::string> vars_;
    TermMap terms_;
};

// ---------------------------------------------------------------------------
// Conversion from expressions.

namespace detail {

inline std::vector<std::string> poly_universe(const Expr& e, const std::vector<std::string>& vars) {
    std::map<std::string, double> syms;
    const_symbols(e, syms);
    std::vector<std::string> universe = vars;
    for (const auto& [name, val] : syms) {
        (void)val;
        if (var_index(universe, name) < 0) universe.push_back(name);
    }
    return universe;
}

inline std::optional<PolyNF> to_poly_rec(const Expr& e, const std::vector<std::string>& universe) {
    switch (e->kind) {
        case ExprKind::Constant: return PolyNF::from_constant(universe, e->value);
        case ExprKind::ConstSym:
        case ExprKind::Var: {
            int i = var_index(universe, e->name);
            if (i < 0) throw Error("to_poly_nf: undeclared variable " + e->name);
            return PolyNF::from_variable(universe, i);
        }
        case ExprKind::Add: {
            auto a = to_poly_rec(e->kids[0], universe), b = to_poly_rec(e->kids[1], universe);
            if (!a || !b) return std::nullopt;
            return *a + *b;
        }
        case ExprKind::Neg: {
            auto a = to_poly_rec(e->kids[0], universe);
            if (!a) return std::nullopt;
            return -*a;
        }
        case ExprKind::Mul: {
            auto a = to_poly_rec(e->kids[0], universe), b = to_poly_rec(e->kids[1], universe);
            if (!a || !b) return std::nullopt;
            return *a * *b;
        }
        case ExprKind::Div: {
            auto a = to_poly_rec(e->kids[0], universe), b = to_poly_rec(e->kids[1], universe);
            if (!a || !b) return std::nullopt;
            if (!b->is_constant() || b->constant_value() == 0) return std::nullopt;
            return a->scaled(Rat(Rat(1) / b->constant_value()));
        }
        case ExprKind::Pow: {
            const Expr& x = e->kids[1];
            if (x->kind != ExprKind::Constant || !rat_is_integer(x->value) || x->value < 0)
                return std::nullopt;
            auto k = rat_to_long(x->value);
            if (!k || *k > 1024) return std::nullopt;
            auto b = to_poly_rec(e->kids[0], universe);
            if (!b) return std::nullopt;
            return b->pow(static_cast<unsigned>(*k));
        }
        case ExprKind::Call: return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace detail

// Canonical polynomial normal form, or nullopt when the expression is not a
// polynomial with rational (or opaque-constant) coefficients.
inline std::optional<PolyNF> to_poly_nf(const Expr& e, const std::vector<std::string>& vars) {
    return detail::to_poly_rec(e, detail::poly_universe(e, vars));
}

// Rational-function normal form num/den (no gcd reduction; used for exact
// equality via cross-multiplication, which tolerates R factors like z^-1).
struct RatNF {
    PolyNF num;
    PolyNF den;
};

namespace detail {

inline std::optional<RatNF> to_rat_rec(const Expr& e, const std::vector<std::string>& universe) {
    auto one = [&] { return PolyNF::from_constant(universe, Rat(1)); };
    switch (e->kind) {
        case ExprKind::Constant:
        case ExprKind::ConstSym:
        case ExprKind::Var: {
            auto p = to_poly_rec(e, universe);
            if (!p) return std::nullopt;
            return RatNF{*p, one()};
        }
        case ExprKind::Add: {
            auto a = to_rat_rec(e->kids[0], universe), b = to_rat_rec(e->kids[1], universe);
            if (!a || !b) return std::nullopt;
            return RatNF{a->num * b->den + b->num * a->den, a->den * b->den};
        }
        case ExprKind::Neg: {
            auto a = to_rat_rec(e->kids[0], universe);
            if (!a) return std::nullopt;
            return RatNF{-a->num, a->den};
        }
        case ExprKind::Mul: {
            auto a = to_rat_rec(e->kids[0], universe), b = to_rat_rec(e->kids[1], universe);
            if (!a || !b) return std::nullopt;
            return RatNF{a->num * b->num, a->den * b->den};
        }
        case ExprKind::Div: {
            auto a = to_rat_rec(e->kids[0], universe), b = to_rat_rec(e->kids[1], universe);
            if (!a || !b) return std::nullopt;
            if (b->num.is_zero()) return std::nullopt;
            return RatNF{a->num * b->den, a->den * b->num};
        }
        case ExprKind::Pow: {
            const Expr& x = e->kids[1];
            if (x->kind != ExprKind::Constant || !rat_is_integer(x->value)) return std::nullopt;
            auto k = rat_to_long(x->value);
            if (!k || *k > 64 || *k < -64) return std::nullopt;
            auto b = to_rat_rec(e->kids[0], universe);
            if (!b) return std::nullopt;
            unsigned mag = static_cast<unsigned>(*k < 0 ? -*k : *k);
            if (*k >= 0) return RatNF{b->num.pow(mag), b->den.pow(mag)};
            if (b->num.is_zero()) return std::nullopt;
            return RatNF{b->den.pow(mag), b->num.pow(mag)};
        }
        case ExprKind::Call: return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace detail

inline std::optional<RatNF> to_rational_nf(const Expr& e, const std::vector<std::string>& vars) {
    return detail::to_rat_rec(e, detail::poly_universe(e, vars));
}

// True when the expression is identically zero as a rational function
// (decided exactly); nullopt when no exact normal form exists.
inline std::optional<bool> zero_symbolic(const Expr& e, const std::vector<std::string>& vars) {
    auto nf = to_rational_nf(e, vars);
    if (!nf) return std::nullopt;
    return nf->num.is_zero();
}

}  // namespace adjflow
