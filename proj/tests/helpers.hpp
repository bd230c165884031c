#pragma once

#include <map>
#include <string>
#include <vector>

#include "adjflow/adjflow.hpp"

namespace testutil {

using namespace adjflow;

inline Expr P(const std::string& text, const std::vector<std::string>& vars,
              const std::map<std::string, double>& consts = {}) {
    return parse_expression(text, vars, consts);
}

// parse over the canonical reduced variables with u,v,w,s aliases
inline Expr PR(const std::string& text, const SystemSpec& spec) {
    return parse_expression(text, spec.reduced_vars, spec.params, reduced_var_aliases(spec.n()));
}

inline SamplePlan unit_plan(std::size_t n, std::uint64_t seed = 42, int count = 200) {
    SamplePlan p;
    p.seed = seed;
    p.count = count;
    p.box = unit_box(n);
    return p;
}

inline bool agrees_everywhere(const Expr& a, const Expr& b, const std::vector<std::string>& vars,
                              const SamplePlan& plan) {
    return is_zero(sub(a, b), vars, plan).zero();
}

// Residual of the construction chain identity
//   grad(I o phi) . F  -  R det(Dphi) ((grad I) o phi) . (G o phi),
// identically zero for ANY reduced-side scalar I, not only first integrals.
inline Expr chain_identity_residual(const SystemSpec& spec, const Expr& r,
                                    const Expr& reduced_scalar) {
    SystemSpec s = spec;
    s.r = r;
    s.expected_f.clear();
    BuildResult build = build_system(s);
    Expr h = substitute(reduced_scalar, s.phi_binding());
    Expr lhs = lie_derivative(h, build.field);
    Expr dot = constant(0L);
    auto binding = s.phi_binding();
    for (std::size_t j = 0; j < s.reduced_vars.size(); ++j) {
        Expr grad_j = substitute(diff(reduced_scalar, s.reduced_vars[j]), binding);
        dot = add(dot, mul(grad_j, substitute(s.g[j], binding)));
    }
    return sub(lhs, mul(mul(r, build.det_dphi), dot));
}

// --- random generators (seeded, deterministic) ------------------------------

inline Rat random_rat(SampleRng& rng, long num_range = 9, long den_range = 4) {
    long num = static_cast<long>(rng.next() % (2 * num_range + 1)) - num_range;
    long den = 1 + static_cast<long>(rng.next() % den_range);
    return make_rat(num, den);
}

inline std::vector<Rat> random_rat_point(SampleRng& rng, std::size_t n) {
    std::vector<Rat> pt;
    for (std::size_t i = 0; i < n; ++i) pt.push_back(random_rat(rng, 50, 20));
    return pt;
}

struct GenOptions {
    bool calls = false;     // exp/sin/cos wrappers
    bool division = false;  // division by non-constant subexpressions
    int max_depth = 4;
};

inline Expr random_expr(SampleRng& rng, const std::vector<std::string>& vars,
                        const GenOptions& opt, int depth = 0) {
    if (depth >= opt.max_depth || rng.next() % 4 == 0) {
        if (rng.next() % 3 == 0) return constant(random_rat(rng));
        return variable(vars[rng.next() % vars.size()]);
    }
    std::uint64_t choices = 4 + (opt.calls ? 1 : 0) + (opt.division ? 1 : 0);
    std::uint64_t pick = rng.next() % choices;
    if (pick == 0)
        return add(random_expr(rng, vars, opt, depth + 1), random_expr(rng, vars, opt, depth + 1));
    if (pick == 1)
        return sub(random_expr(rng, vars, opt, depth + 1), random_expr(rng, vars, opt, depth + 1));
    if (pick == 2)
        return mul(random_expr(rng, vars, opt, depth + 1), random_expr(rng, vars, opt, depth + 1));
    if (pick == 3)
        return power(random_expr(rng, vars, opt, depth + 1), 2 + static_cast<long>(rng.next() % 2));
    if (pick == 4 && opt.calls) {
        static const char* fns[] = {"exp", "sin", "cos"};
        return call(fns[rng.next() % 3], random_expr(rng, vars, opt, depth + 1));
    }
    // denominators of the form 1 + v^2 keep generated expressions pole-free
    return divide(random_expr(rng, vars, opt, depth + 1),
                  add(constant(1L), power(variable(vars[rng.next() % vars.size()]), 2)));
}

inline Expr random_poly_expr(SampleRng& rng, const std::vector<std::string>& vars, int depth = 0) {
    GenOptions opt;
    opt.max_depth = 3;
    return random_expr(rng, vars, opt, depth);
}

inline SymMatrix random_rat_matrix(SampleRng& rng, int n) {
    SymMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = constant(random_rat(rng));
    return m;
}

inline SymMatrix random_poly_matrix(SampleRng& rng, int n, const std::vector<std::string>& vars) {
    SymMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            GenOptions opt;
            opt.max_depth = 2;
            m.at(i, j) = random_expr(rng, vars, opt);
        }
    return m;
}

}  // namespace testutil
