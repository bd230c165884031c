#pragma once

// Construction of differential systems F = R * adj(D phi) * (G o phi) from a
// SystemSpec, pullback of reduced-system first integrals, and hypothesis
// checks (base image, G nonzero at the image, R nonzero a.e., Jacobian
// determinant not identically zero, global polynomial candidacy).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adjflow/sampling.hpp"
#include "adjflow/symmat.hpp"

namespace adjflow {

// Canonical reduced variable names u1..un; u,v,w,s are accepted aliases for
// n <= 4 at the parsing layer.
inline std::vector<std::string> canonical_reduced_vars(int n) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) out.push_back("u" + std::to_string(i));
    return out;
}

inline std::map<std::string, std::string> reduced_var_aliases(int n) {
    static const char* short_names[] = {"u", "v", "w", "s"};
    std::map<std::string, std::string> aliases;
    if (n <= 4)
        for (int i = 0; i < n; ++i) aliases.emplace(short_names[i], "u" + std::to_string(i + 1));
    return aliases;
}

struct VectorField {
    std::vector<std::string> state_vars;
    std::vector<Expr> components;

    int n() const { return static_cast<int>(components.size()); }
};

struct SystemSpec {
    std::vector<std::string> state_vars;
    std::vector<std::string> reduced_vars;           // canonical u1..un
    std::map<std::string, double> params;            // opaque named constants
    std::map<std::string, std::string> param_defs;   // printable definitions
    std::vector<Expr> phi;                           // in state_vars
    std::vector<Expr> g;                             // in reduced_vars
    Expr r = constant(1L);                           // in state_vars
    std::vector<Rat> base_point;                     // default: origin
    std::vector<std::pair<std::string, Expr>> reduced_integrals;
    std::vector<Expr> expected_f;                    // optional (empty)
    std::vector<std::pair<std::string, Expr>> expected_h;  // optional

    int n() const { return static_cast<int>(state_vars.size()); }

    std::vector<Rat> base() const {
        if (!base_point.empty()) return base_point;
        return std::vector<Rat>(state_vars.size(), Rat(0));
    }

    void validate() const {
        std::size_t dim = state_vars.size();
        if (dim == 0) throw Error("spec: empty variable list");
        if (phi.size() != dim) throw Error("spec: phi must have n components");
        if (g.size() != dim) throw Error("spec: G must have n components");
        if (!base_point.empty() && base_point.size() != dim)
            throw Error("spec: base point must have n coordinates");
        if (!expected_f.empty() && expected_f.size() != dim)
            throw Error("spec: expected_F must have n components");
        for (const auto& v : state_vars)
            if (builtin_functions().count(v)) throw Error("spec: variable name '" + v + "' is reserved");
    }

    SamplePlan default_plan(std::uint64_t seed = 42, int count = 200) const {
        return plan_for_base(base(), seed, count);
    }

    std::map<std::string, Expr> phi_binding() const {
        std::map<std::string, Expr> b;
        for (std::size_t i = 0; i < reduced_vars.size(); ++i) b.emplace(reduced_vars[i], phi[i]);
        return b;
    }
};

// ---------------------------------------------------------------------------
// Construction.

struct ComponentCheck {
    int index = 0;
    ZeroVerdict verdict;  // difference built - expected
};

struct BuildResult {
    VectorField field;
    Expr det_dphi;
    std::vector<ComponentCheck> expected_match;  // one per component if expected_F given
    bool all_match = true;                       // vacuously true without expected_F
};

inline BuildResult build_system(const SystemSpec& spec, const SamplePlan* plan_in = nullptr) {
    spec.validate();
    SymMatrix dphi = jacobian(spec.phi, spec.state_vars);
    SymMatrix adj = adjugate(dphi);
    auto binding = spec.phi_binding();
    std::vector<Expr> g_of_phi;
    g_of_phi.reserve(spec.g.size());
    for (const auto& gi : spec.g) g_of_phi.push_back(substitute(gi, binding));
    std::vector<Expr> product = matvec(adj, g_of_phi);

    BuildResult out;
    out.field.state_vars = spec.state_vars;
    for (auto& comp : product) out.field.components.push_back(mul(spec.r, comp));
    out.det_dphi = determinant(dphi);

    if (!spec.expected_f.empty()) {
        SamplePlan plan = plan_in ? *plan_in : spec.default_plan();
        if (plan.box.empty()) plan.box = default_box(spec.base());
        for (int i = 0; i < out.field.n(); ++i) {
            Expr difference = sub(out.field.components[static_cast<std::size_t>(i)],
                                  spec.expected_f[static_cast<std::size_t>(i)]);
            ComponentCheck check;
            check.index = i;
            check.verdict = is_zero(difference, spec.state_vars, plan);
            if (!check.verdict.zero()) out.all_match = false;
            out.expected_match.push_back(std::move(check));
        }
    }
    return out;
}

// Field used for verification and integration: the declared expected field
// when present (equal to the built one by the construction checks), else the
// built one.
inline VectorField effective_field(const SystemSpec& spec, const BuildResult& build) {
    if (!spec.expected_f.empty()) return VectorField{spec.state_vars, spec.expected_f};
    return build.field;
}

// Equality of two expressions as functions: exactly via the rational normal
// form when available, otherwise sampled difference at most zero_tol relative
// to the sampled magnitude (so e^(-x-xy) and e^(-xy-x) compare equal and
// large exponentials are judged on relative error).
inline bool expressions_match(const Expr& a, const Expr& b, const std::vector<std::string>& vars,
                              const SamplePlan& plan) {
    Expr difference = sub(a, b);
    auto sym = zero_symbolic(difference, vars);
    if (sym) return *sym;
    int finite = 0;
    double scale = sample_abs_max(a, vars, plan, &finite);
    if (finite == 0) return false;
    double diff = sample_abs_max(difference, vars, plan, &finite);
    if (finite == 0) return false;
    return diff <= plan.zero_tol * std::max(1.0, scale);
}

// ---------------------------------------------------------------------------
// Pullback of reduced-system integrals.

enum class Provenance { Pullback, UserSupplied };

struct FirstIntegral {
    std::string label;
    Expr h;                    // in state_vars
    Provenance provenance = Provenance::Pullback;
    ConstVerdict constancy;
    bool degenerate_constant = false;
};

inline FirstIntegral pullback(const SystemSpec& spec, const std::string& label, const Expr& reduced_integral,
                              const SamplePlan* plan_in = nullptr) {
    FirstIntegral fi;
    fi.label = label;
    fi.h = substitute(reduced_integral, spec.phi_binding());
    fi.provenance = Provenance::Pullback;
    SamplePlan plan = plan_in ? *plan_in : spec.default_plan();
    if (plan.box.empty()) plan.box = default_box(spec.base());
    fi.constancy = is_constant(fi.h, spec.state_vars, plan);
    fi.degenerate_constant = fi.constancy.constant();
    return fi;
}

// ---------------------------------------------------------------------------
// Hypothesis checks.

struct NumberVal {
    std::optional<Rat> exact;
    double approx = 0;

    static NumberVal from_rat(const Rat& r) { return {r, rat_to_double(r)}; }
    static NumberVal from_double(double d) { return {std::nullopt, d}; }
    std::string str() const {
        if (exact) return rat_to_string(*exact);
        std::ostringstream os;
        os << approx;
        return os.str();
    }
};

struct HypothesisReport {
    std::vector<NumberVal> base_point;      // p
    std::vector<NumberVal> image_q;         // q = phi(p), computed, never declared
    std::vector<NumberVal> g_at_q;
    bool g_nonzero_at_q = false;
    std::vector<NumberVal> f_at_base;
    bool singular_at_base = false;          // F(p) = 0 (informational)
    ZeroVerdict r_nonzero;                  // must be NonZero
    ZeroVerdict det_verdict;                // NonZero certifies dimension preservation
    bool sufficient_condition_ok = false;   // det(D phi) not identically zero
    bool sufficient_condition_failed = false;  // det identically zero (flag, not failure)
    ExprClass phi_class = ExprClass::Polynomial;
    ExprClass g_class = ExprClass::Polynomial;
    ExprClass r_class = ExprClass::Polynomial;
    bool global_candidate = false;          // phi, G, R all polynomial on R^n
};

namespace detail {

inline std::vector<NumberVal> eval_components(const std::vector<Expr>& comps,
                                              const std::vector<std::string>& vars,
                                              const std::vector<NumberVal>& at) {
    std::vector<Rat> exact_pt;
    bool all_exact = true;
    std::vector<double> approx_pt;
    for (const auto& v : at) {
        if (v.exact)
            exact_pt.push_back(*v.exact);
        else
            all_exact = false;
        approx_pt.push_back(v.approx);
    }
    std::vector<NumberVal> out;
    for (const auto& c : comps) {
        std::optional<Rat> ex;
        if (all_exact) ex = eval_exact(c, vars, exact_pt);
        if (ex)
            out.push_back(NumberVal::from_rat(*ex));
        else
            out.push_back(NumberVal::from_double(eval_double(c, vars, approx_pt)));
    }
    return out;
}

inline bool any_nonzero(const std::vector<NumberVal>& vals, double tol) {
    for (const auto& v : vals) {
        if (v.exact && *v.exact != 0) return true;
        if (!v.exact && std::fabs(v.approx) > tol) return true;
    }
    return false;
}

inline ExprClass worst_class(const std::vector<Expr>& comps) {
    ExprClass c = ExprClass::Polynomial;
    for (const auto& e : comps) c = std::max(c, classify(e));
    return c;
}

}  // namespace detail

inline HypothesisReport check_hypotheses(const SystemSpec& spec, const SamplePlan& plan_in,
                                         const BuildResult* prebuilt = nullptr) {
    spec.validate();
    SamplePlan plan = plan_in;
    if (plan.box.empty()) plan.box = default_box(spec.base());

    HypothesisReport rep;
    for (const auto& b : spec.base()) rep.base_point.push_back(NumberVal::from_rat(b));
    rep.image_q = detail::eval_components(spec.phi, spec.state_vars, rep.base_point);
    rep.g_at_q = detail::eval_components(spec.g, spec.reduced_vars, rep.image_q);
    rep.g_nonzero_at_q = detail::any_nonzero(rep.g_at_q, plan.zero_tol);

    BuildResult local;
    const BuildResult* build = prebuilt;
    if (!build) {
        local = build_system(spec, &plan);
        build = &local;
    }
    rep.f_at_base = detail::eval_components(build->field.components, spec.state_vars, rep.base_point);
    rep.singular_at_base = !detail::any_nonzero(rep.f_at_base, plan.zero_tol);

    rep.r_nonzero = is_zero(spec.r, spec.state_vars, plan);
    rep.det_verdict = is_zero(build->det_dphi, spec.state_vars, plan);
    rep.sufficient_condition_ok = rep.det_verdict.nonzero();
    rep.sufficient_condition_failed = rep.det_verdict.zero();

    rep.phi_class = detail::worst_class(spec.phi);
    rep.g_class = detail::worst_class(spec.g);
    rep.r_class = classify(spec.r);
    rep.global_candidate = rep.phi_class == ExprClass::Polynomial &&
                           rep.g_class == ExprClass::Polynomial &&
                           rep.r_class == ExprClass::Polynomial;
    return rep;
}

}  // namespace adjflow
