#pragma once

// Seeded deterministic sampling and the zero/constancy decision procedures.
//
// Sample points are dyadic rationals inside the plan's box, derived from
// (seed, sample index) only, so results are identical regardless of
// evaluation order. Symbolic normal forms are tried first; sampling is the
// fallback for call-bearing or irrational-exponent expressions.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adjflow/polynf.hpp"

namespace adjflow {

struct SamplePlan {
    std::uint64_t seed = 42;
    int count = 200;
    double zero_tol = 1e-9;
    double rank_tol = 1e-8;
    double max_nonfinite_fraction = 0.5;
    std::vector<std::pair<Rat, Rat>> box;  // per-variable closed interval

    SamplePlan with_box(std::vector<std::pair<Rat, Rat>> b) const {
        SamplePlan p = *this;
        p.box = std::move(b);
        return p;
    }
};

// Default box: [-1, 1]^n translated to the base point.
inline std::vector<std::pair<Rat, Rat>> default_box(const std::vector<Rat>& base) {
    std::vector<std::pair<Rat, Rat>> box;
    box.reserve(base.size());
    for (const auto& b : base) box.emplace_back(Rat(b - 1), Rat(b + 1));
    return box;
}

inline std::vector<std::pair<Rat, Rat>> unit_box(std::size_t n) {
    return std::vector<std::pair<Rat, Rat>>(n, {Rat(-1), Rat(1)});
}

inline SamplePlan plan_for_base(const std::vector<Rat>& base, std::uint64_t seed = 42,
                                int count = 200) {
    SamplePlan p;
    p.seed = seed;
    p.count = count;
    p.box = default_box(base);
    return p;
}

// splitmix64 stream keyed by (seed, index); schedule-independent.
class SampleRng {
public:
    SampleRng(std::uint64_t seed, std::uint64_t index)
        : state_(mix(seed + 0x9E3779B97F4A7C15ULL * (index + 1))) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    std::uint64_t state_;
};

// Dyadic sample point: coordinate j of sample i is lo + (hi-lo) * k/2^20.
inline std::vector<Rat> sample_point(const SamplePlan& plan, int index) {
    SampleRng rng(plan.seed, static_cast<std::uint64_t>(index));
    std::vector<Rat> pt;
    pt.reserve(plan.box.size());
    for (const auto& [lo, hi] : plan.box) {
        std::uint64_t k = rng.next() >> 44;  // 20 bits
        Rat frac(static_cast<long>(k), 1048576L);
        frac.canonicalize();
        pt.push_back(Rat(lo + (hi - lo) * frac));
    }
    return pt;
}

inline std::vector<double> to_double_point(const std::vector<Rat>& pt) {
    std::vector<double> out;
    out.reserve(pt.size());
    for (const auto& r : pt) out.push_back(rat_to_double(r));
    return out;
}

// ---------------------------------------------------------------------------
// Zero testing.

enum class ZeroKind { ZeroSymbolic, ZeroNumeric, NonZero, Inconclusive };

inline const char* to_string(ZeroKind k) {
    switch (k) {
        case ZeroKind::ZeroSymbolic: return "ZeroSymbolic";
        case ZeroKind::ZeroNumeric: return "ZeroNumeric";
        case ZeroKind::NonZero: return "NonZero";
        case ZeroKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct ZeroVerdict {
    ZeroKind kind = ZeroKind::Inconclusive;
    std::vector<double> witness;  // point with |value| > tol, when NonZero
    double witness_value = 0;
    double max_abs = 0;
    int finite_samples = 0;
    int total_samples = 0;
    std::string note;

    bool zero() const { return kind == ZeroKind::ZeroSymbolic || kind == ZeroKind::ZeroNumeric; }
    bool nonzero() const { return kind == ZeroKind::NonZero; }
};

inline ZeroVerdict is_zero(const Expr& e, const std::vector<std::string>& vars,
                           const SamplePlan& plan) {
    ZeroVerdict v;
    auto sym = zero_symbolic(e, vars);
    if (sym && *sym) {
        v.kind = ZeroKind::ZeroSymbolic;
        return v;
    }
    v.total_samples = plan.count;
    for (int i = 0; i < plan.count; ++i) {
        auto pt = to_double_point(sample_point(plan, i));
        double val = eval_double(e, vars, pt);
        if (!std::isfinite(val)) continue;
        ++v.finite_samples;
        double a = std::fabs(val);
        if (a > v.max_abs) v.max_abs = a;
        if (a > plan.zero_tol && v.witness.empty()) {
            v.witness = pt;
            v.witness_value = val;
        }
    }
    // a witness proves nonzero regardless of how many samples hit poles;
    // concluding zero needs enough finite coverage
    if (!v.witness.empty()) {
        v.kind = ZeroKind::NonZero;
        return v;
    }
    if (v.finite_samples == 0) {
        v.kind = ZeroKind::Inconclusive;
        v.note = "AllSamplesNonFinite";
        return v;
    }
    double nonfinite = 1.0 - static_cast<double>(v.finite_samples) / plan.count;
    if (nonfinite > plan.max_nonfinite_fraction) {
        v.kind = ZeroKind::Inconclusive;
        v.note = "TooManySamplesNonFinite";
        return v;
    }
    v.kind = ZeroKind::ZeroNumeric;
    return v;
}

// Maximum |e| over finite samples (numeric path only, bypassing normal
// forms); used to cross-check symbolic verdicts against sampling.
inline double sample_abs_max(const Expr& e, const std::vector<std::string>& vars,
                             const SamplePlan& plan, int* finite_out = nullptr) {
    double max_abs = 0;
    int finite = 0;
    for (int i = 0; i < plan.count; ++i) {
        double val = eval_double(e, vars, to_double_point(sample_point(plan, i)));
        if (!std::isfinite(val)) continue;
        ++finite;
        max_abs = std::max(max_abs, std::fabs(val));
    }
    if (finite_out) *finite_out = finite;
    return max_abs;
}

// ---------------------------------------------------------------------------
// Constancy testing.

enum class ConstKind { ConstantSymbolic, ConstantNumeric, NonConstant, Inconclusive };

inline const char* to_string(ConstKind k) {
    switch (k) {
        case ConstKind::ConstantSymbolic: return "ConstantSymbolic";
        case ConstKind::ConstantNumeric: return "ConstantNumeric";
        case ConstKind::NonConstant: return "NonConstant";
        case ConstKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct ConstVerdict {
    ConstKind kind = ConstKind::Inconclusive;
    double spread = 0;
    std::string note;

    bool constant() const {
        return kind == ConstKind::ConstantSymbolic || kind == ConstKind::ConstantNumeric;
    }
};

inline ConstVerdict is_constant(const Expr& e, const std::vector<std::string>& vars,
                                const SamplePlan& plan) {
    ConstVerdict v;
    auto nf = to_poly_nf(e, vars);
    if (nf) {
        // constant iff no term mentions an actual variable (opaque constants
        // occupy trailing universe slots and do not count)
        bool constant = true;
        for (const auto& [expo, c] : nf->terms()) {
            (void)c;
            for (std::size_t i = 0; i < vars.size(); ++i)
                if (expo[i] != 0) constant = false;
        }
        v.kind = constant ? ConstKind::ConstantSymbolic : ConstKind::NonConstant;
        return v;
    }
    double lo = 0, hi = 0;
    int finite = 0;
    for (int i = 0; i < plan.count; ++i) {
        double val = eval_double(e, vars, to_double_point(sample_point(plan, i)));
        if (!std::isfinite(val)) continue;
        if (finite == 0) lo = hi = val;
        lo = std::min(lo, val);
        hi = std::max(hi, val);
        ++finite;
    }
    if (finite == 0) {
        v.note = "AllSamplesNonFinite";
        return v;
    }
    if (1.0 - static_cast<double>(finite) / plan.count > plan.max_nonfinite_fraction) {
        v.note = "TooManySamplesNonFinite";
        return v;
    }
    v.spread = hi - lo;
    v.kind = v.spread <= plan.zero_tol ? ConstKind::ConstantNumeric : ConstKind::NonConstant;
    return v;
}

}  // namespace adjflow
