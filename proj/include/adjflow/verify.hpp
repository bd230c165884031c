#pragma once

// Lie-derivative verification, functional-independence rank testing, and
// report assembly.
//
// Independence is decided per sample point: exact rational elimination when
// every gradient entry is polynomial (the sample points are rational), and a
// one-sided Jacobi singular value count otherwise. A family is independent
// when the gradient matrix has full rank at >= 99% of the finite samples,
// the numeric stand-in for "a full Lebesgue measure open subset".

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "adjflow/system.hpp"

namespace adjflow {

inline Expr lie_derivative(const Expr& h, const VectorField& field) {
    Expr acc = constant(0L);
    for (std::size_t i = 0; i < field.components.size(); ++i)
        acc = add(acc, mul(diff(h, field.state_vars[i]), field.components[i]));
    return acc;
}

// ---------------------------------------------------------------------------
// Per-integral verification.

enum class LieVerdict { VerifiedSymbolic, VerifiedNumeric, FailedNonZero, DegenerateConstant, Inconclusive };

inline const char* to_string(LieVerdict v) {
    switch (v) {
        case LieVerdict::VerifiedSymbolic: return "VerifiedSymbolic";
        case LieVerdict::VerifiedNumeric: return "VerifiedNumeric";
        case LieVerdict::FailedNonZero: return "FailedNonZero";
        case LieVerdict::DegenerateConstant: return "DegenerateConstant";
        case LieVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct IntegralRecord {
    std::string label;
    std::string expression;
    Provenance provenance = Provenance::Pullback;
    ExprClass h_class = ExprClass::Polynomial;
    LieVerdict verdict = LieVerdict::Inconclusive;
    ZeroVerdict lie_zero;
    ConstVerdict constancy;
};

inline LieVerdict verify_first_integral(const FirstIntegral& fi, const VectorField& field,
                                        const SamplePlan& plan, ZeroVerdict* lie_out = nullptr) {
    if (fi.degenerate_constant) return LieVerdict::DegenerateConstant;
    ZeroVerdict z = is_zero(lie_derivative(fi.h, field), field.state_vars, plan);
    if (lie_out) *lie_out = z;
    switch (z.kind) {
        case ZeroKind::ZeroSymbolic: return LieVerdict::VerifiedSymbolic;
        case ZeroKind::ZeroNumeric: return LieVerdict::VerifiedNumeric;
        case ZeroKind::NonZero: return LieVerdict::FailedNonZero;
        case ZeroKind::Inconclusive: return LieVerdict::Inconclusive;
    }
    return LieVerdict::Inconclusive;
}

// ---------------------------------------------------------------------------
// Rank computation.

namespace detail {

inline int rank_exact(std::vector<std::vector<Rat>> m) {
    int rows = static_cast<int>(m.size());
    if (rows == 0) return 0;
    int cols = static_cast<int>(m[0].size());
    int rank = 0;
    int col = 0;
    for (int row = 0; row < rows && col < cols; ++col) {
        int pivot = -1;
        for (int i = row; i < rows; ++i)
            if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[static_cast<std::size_t>(row)], m[static_cast<std::size_t>(pivot)]);
        for (int i = row + 1; i < rows; ++i) {
            Rat factor = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] /
                         m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
            if (factor == 0) continue;
            for (int j = col; j < cols; ++j)
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                    factor * m[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)];
        }
        ++row;
        ++rank;
    }
    return rank;
}

// One-sided Jacobi orthogonalization of the rows; singular values are the
// final row norms. Rank counts values above rank_tol * largest.
inline int rank_numeric(std::vector<std::vector<double>> m, double rank_tol) {
    std::size_t rows = m.size();
    if (rows == 0) return 0;
    for (int sweep = 0; sweep < 30; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < rows; ++p) {
            for (std::size_t q = p + 1; q < rows; ++q) {
                double alpha = 0, beta = 0, gamma = 0;
                for (std::size_t j = 0; j < m[p].size(); ++j) {
                    alpha += m[p][j] * m[p][j];
                    beta += m[q][j] * m[q][j];
                    gamma += m[p][j] * m[q][j];
                }
                if (std::fabs(gamma) <= 1e-30 ||
                    std::fabs(gamma) <= 1e-15 * std::sqrt(alpha * beta))
                    continue;
                rotated = true;
                double zeta = (beta - alpha) / (2.0 * gamma);
                double t = (zeta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (std::size_t j = 0; j < m[p].size(); ++j) {
                    double vp = m[p][j], vq = m[q][j];
                    m[p][j] = c * vp - s * vq;
                    m[q][j] = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }
    std::vector<double> sigma;
    sigma.reserve(rows);
    for (const auto& row : m) {
        double norm2 = 0;
        for (double v : row) norm2 += v * v;
        sigma.push_back(std::sqrt(norm2));
    }
    double largest = *std::max_element(sigma.begin(), sigma.end());
    if (largest == 0) return 0;
    int rank = 0;
    for (double s : sigma)
        if (s > rank_tol * largest) ++rank;
    return rank;
}

}  // namespace detail

struct IndependenceRecord {
    int m = 0;  // number of integrals tested
    int total_samples = 0;
    int finite_samples = 0;
    std::map<int, int> rank_counts;  // rank -> number of samples
    double pass_fraction = 0;        // fraction of finite samples with rank == m
    bool independent = false;        // pass_fraction >= 0.99
    bool exact_path = false;         // rational elimination used
};

inline IndependenceRecord independence_rank(const std::vector<FirstIntegral>& integrals,
                                            const std::vector<std::string>& state_vars,
                                            const SamplePlan& plan) {
    if (integrals.empty()) throw Error("independence_rank: no integrals");
    IndependenceRecord rec;
    rec.m = static_cast<int>(integrals.size());
    rec.total_samples = plan.count;

    std::vector<std::vector<Expr>> grads;
    bool all_poly = true;
    for (const auto& fi : integrals) {
        std::vector<Expr> g;
        for (const auto& v : state_vars) {
            Expr d = diff(fi.h, v);
            if (classify(d) != ExprClass::Polynomial) all_poly = false;
            g.push_back(d);
        }
        grads.push_back(std::move(g));
    }
    rec.exact_path = all_poly;

    for (int i = 0; i < plan.count; ++i) {
        std::vector<Rat> pt = sample_point(plan, i);
        int rank = -1;
        if (all_poly) {
            std::vector<std::vector<Rat>> mat;
            bool exact_ok = true;
            for (const auto& g : grads) {
                std::vector<Rat> row;
                for (const auto& d : g) {
                    auto v = eval_exact(d, state_vars, pt);
                    if (!v) {
                        exact_ok = false;
                        break;
                    }
                    row.push_back(*v);
                }
                if (!exact_ok) break;
                mat.push_back(std::move(row));
            }
            if (exact_ok) rank = detail::rank_exact(std::move(mat));
        }
        if (rank < 0) {
            auto dpt = to_double_point(pt);
            std::vector<std::vector<double>> mat;
            bool finite = true;
            for (const auto& g : grads) {
                std::vector<double> row;
                for (const auto& d : g) {
                    double v = eval_double(d, state_vars, dpt);
                    if (!std::isfinite(v)) {
                        finite = false;
                        break;
                    }
                    row.push_back(v);
                }
                if (!finite) break;
                mat.push_back(std::move(row));
            }
            if (!finite) continue;  // excluded from the denominator
            rank = detail::rank_numeric(std::move(mat), plan.rank_tol);
        }
        ++rec.finite_samples;
        rec.rank_counts[rank] += 1;
    }

    if (rec.finite_samples == 0) throw Error("independence_rank: AllSamplesNonFinite");
    auto it = rec.rank_counts.find(rec.m);
    int full = it == rec.rank_counts.end() ? 0 : it->second;
    rec.pass_fraction = static_cast<double>(full) / rec.finite_samples;
    rec.independent = rec.pass_fraction >= 0.99;
    return rec;
}

// ---------------------------------------------------------------------------
// Report assembly.

enum class Classification { Failed, Degenerate, PartiallyVerified, CompletelyIntegrableVerified };

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::Failed: return "Failed";
        case Classification::Degenerate: return "Degenerate";
        case Classification::PartiallyVerified: return "PartiallyVerified";
        case Classification::CompletelyIntegrableVerified: return "CompletelyIntegrableVerified";
    }
    return "?";
}

inline std::optional<Classification> classification_from_string(const std::string& s) {
    if (s == "Failed") return Classification::Failed;
    if (s == "Degenerate") return Classification::Degenerate;
    if (s == "PartiallyVerified") return Classification::PartiallyVerified;
    if (s == "CompletelyIntegrableVerified") return Classification::CompletelyIntegrableVerified;
    return std::nullopt;
}

struct VerificationReport {
    HypothesisReport hypotheses;
    std::vector<IntegralRecord> integrals;
    std::optional<IndependenceRecord> independence;  // over the verified integrals
    Classification classification = Classification::Failed;
    std::uint64_t seed = 0;
    int samples = 0;
    double zero_tol = 0, rank_tol = 0;
};

// Classification is a pure function of the component records:
//  - Failed: some Lie derivative is provably nonzero, or nothing verified
//    and G(q) = 0 (the flow-box route is closed too);
//  - CompletelyIntegrableVerified: n-1 verified integrals, independent;
//  - Degenerate: a constant pullback, or verified integrals that collapse
//    (independence fails);
//  - PartiallyVerified: everything else with hypotheses or integrals intact.
inline Classification classify_records(int n, const std::vector<IntegralRecord>& integrals,
                                       const std::optional<IndependenceRecord>& indep,
                                       bool g_nonzero_at_q) {
    int verified = 0;
    bool any_failed = false, any_constant = false;
    for (const auto& rec : integrals) {
        if (rec.verdict == LieVerdict::VerifiedSymbolic || rec.verdict == LieVerdict::VerifiedNumeric)
            ++verified;
        if (rec.verdict == LieVerdict::FailedNonZero) any_failed = true;
        if (rec.verdict == LieVerdict::DegenerateConstant) any_constant = true;
    }
    if (any_failed) return Classification::Failed;
    bool independent = indep && indep->independent;
    if (verified == n - 1 && verified >= 1 && independent)
        return Classification::CompletelyIntegrableVerified;
    if (any_constant || (verified >= 2 && indep && !indep->independent))
        return Classification::Degenerate;
    if (verified >= 1) return Classification::PartiallyVerified;
    return g_nonzero_at_q ? Classification::PartiallyVerified : Classification::Failed;
}

inline VerificationReport assemble_report(const SystemSpec& spec, const VectorField& field,
                                          const std::vector<FirstIntegral>& integrals,
                                          const SamplePlan& plan_in,
                                          const BuildResult* prebuilt = nullptr) {
    SamplePlan plan = plan_in;
    if (plan.box.empty()) plan.box = default_box(spec.base());

    VerificationReport rep;
    rep.seed = plan.seed;
    rep.samples = plan.count;
    rep.zero_tol = plan.zero_tol;
    rep.rank_tol = plan.rank_tol;
    rep.hypotheses = check_hypotheses(spec, plan, prebuilt);

    std::vector<FirstIntegral> verified;
    for (const auto& fi : integrals) {
        IntegralRecord rec;
        rec.label = fi.label;
        rec.expression = to_string(fi.h);
        rec.provenance = fi.provenance;
        rec.h_class = classify(fi.h);
        rec.constancy = fi.constancy;
        rec.verdict = verify_first_integral(fi, field, plan, &rec.lie_zero);
        if (rec.verdict == LieVerdict::VerifiedSymbolic || rec.verdict == LieVerdict::VerifiedNumeric)
            verified.push_back(fi);
        rep.integrals.push_back(std::move(rec));
    }
    if (!verified.empty())
        rep.independence = independence_rank(verified, spec.state_vars, plan);

    rep.classification = classify_records(spec.n(), rep.integrals, rep.independence,
                                          rep.hypotheses.g_nonzero_at_q);
    return rep;
}

}  // namespace adjflow
