#pragma once

// The regression corpus: one entry per worked system, stored as the same
// line-oriented documents the CLI consumes, so exporting an entry and
// re-running it is the identity. Free parameters of the source families are
// pinned per entry and recorded in `notes`.

#include <string>
#include <vector>

#include "adjflow/odeint.hpp"
#include "adjflow/sysfile.hpp"

namespace adjflow {

struct CatalogEntry {
    std::string id;
    std::string title;
    std::string notes;     // pinned parameter bindings
    std::string document;  // system file text
    ParsedSystemFile parsed;
};

namespace detail {

struct CatalogDef {
    const char* id;
    const char* title;
    const char* notes;
    const char* document;
};

inline const std::vector<CatalogDef>& catalog_defs() {
    static const std::vector<CatalogDef> defs = {
        {"ex3_2", "Planar Kolmogorov system", "no free parameters",
         "vars = x, y\n"
         "phi = x*y, x + y^2/2\n"
         "G = u, 1 - u\n"
         "R = 1\n"
         "integrals = I: u*exp(-u - v)\n"
         "expected_F = x*(-1 + x*y + y^2), y*(1 - x - x*y)\n"
         "expected_H = H: x*y*exp(-x - x*y - y^2/2)\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = 0.5, 0.5\n"
         "T = 10\n"},

        {"ex3_3", "Planar nilpotent center", "b = 1",
         "vars = x, y\n"
         "phi = x^2/2 + y^2/2, y^2/2\n"
         "G = 1, -2*u\n"
         "R = 1\n"
         "integrals = I: v + u^2\n"
         "expected_F = y + x^2*y + y^3, -x^3 - x*y^2\n"
         "expected_H = H: y^2/2 + (x^2/2 + y^2/2)^2\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = 0.4, 0.3\n"
         "T = 10\n"},

        {"ex3_4", "Degenerate center with irrational-power integral", "k = 1, a = sqrt(2)+1",
         "vars = x, y\n"
         "param a = sqrt(2) + 1\n"
         "phi = x^2, y^2\n"
         "G = (a + 3)*u + 2*a*v, -2*a*u - (4*a - 3)*v\n"
         "R = 1\n"
         "integrals = I: (u + 2*v)*(2*u + v)^(a - 1)\n"
         "expected_F = 2*(a + 3)*x^2*y + 4*a*y^3, -4*a*x^3 - 2*(4*a - 3)*x*y^2\n"
         "expected_H = H: (x^2 + 2*y^2)*(2*x^2 + y^2)^(a - 1)\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = 0.3, 0.4\n"
         "T = 10\n"},

        {"ex3_5", "Loud reversible quadratic center, quadratic reduction",
         "alpha = 1, beta = 1, gamma = 2",
         "vars = x, y\n"
         "phi = x, y^2/2\n"
         "G = 1 + u, -u + u^2 + 4*v\n"
         "R = 1\n"
         "expected_F = y + x*y, -x + x^2 + 2*y^2\n"
         "expect = PartiallyVerified\n"
         "x0 = 0.2, 0.3\n"
         "T = 10\n"},

        {"ex3_5b", "Loud reversible quadratic center, linear reduction",
         "alpha = 1, beta = 1, gamma = 2 (beta*(gamma-alpha) != 0)",
         "vars = x, y\n"
         "phi = x^2 + y^2, x\n"
         "G = -2*u, -v/2 - 1/2\n"
         "R = 1\n"
         "expected_F = y + x*y, -x + x^2 + 2*y^2\n"
         "expect = PartiallyVerified\n"
         "x0 = 0.2, 0.3\n"
         "T = 10\n"},

        {"ex3_6", "Lienard system", "g(s) = 1 + s, f(s) = s",
         "vars = x, y\n"
         "phi = x^2, y\n"
         "G = v, -(1 + u + u*v)/2\n"
         "R = 1\n"
         "expected_F = y, -x - x^3 - x^3*y\n"
         "expect = PartiallyVerified\n"
         "x0 = 0.3, 0.2\n"
         "T = 10\n"},

        {"ex3_7", "Lotka-Volterra subcase with polynomial integral",
         "a = 1, c = 1, B = 1, b = -2 (p = q = 1)",
         "vars = x, y\n"
         "phi = x*y, y - x\n"
         "G = -u, v - 1\n"
         "R = 1\n"
         "integrals = I: u*(v - 1)\n"
         "expected_F = x*(x - 2*y + 1), y*(y - 2*x - 1)\n"
         "expected_H = H: x*y*(y - x - 1)\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = -0.3, 0.3\n"
         "T = 10\n"},

        {"ex3_8", "Second Lotka-Volterra family", "a = 1, c = 1, b = -1, B = 1 (-b/B = 1)",
         "vars = x, y\n"
         "phi = x, y + x*y - y^2/2\n"
         "G = u, -v\n"
         "R = 1\n"
         "integrals = I: u*v\n"
         "expected_F = x*(x - y + 1), y*(-2*x + y/2 - 1)\n"
         "expected_H = H: x*(y + x*y - y^2/2)\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = -0.3, 0.6\n"
         "T = 10\n"},

        {"ex3_9", "Degenerate planar map (rank-deficient Jacobian)", "s(x) = x^3",
         "vars = x, y\n"
         "phi = x, x^3\n"
         "G = 1, 2*u\n"
         "R = 1\n"
         "integrals = I: u^2 + v\n"
         "expected_F = 0, 2*x - 3*x^2\n"
         "expected_H = H: x^2 + x^3\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = 0.5, 0.5\n"
         "T = 10\n"},

        {"ex4_1", "Kolmogorov system in space", "psi = x + y + z",
         "vars = x, y, z\n"
         "phi = x*y*z, x + y + z, z\n"
         "G = 0, 0, 1\n"
         "R = 1\n"
         "integrals = I1: u, I2: v\n"
         "expected_F = x*(z - y), y*(x - z), z*(y - x)\n"
         "expected_H = H1: x*y*z, H2: x + y + z\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = 0.3, 0.4, 0.6\n"
         "T = 10\n"},

        {"ex4_2", "Second Kolmogorov system in space", "no free parameters",
         "vars = x, y, z\n"
         "phi = y*z, x*z + x^2, x*z - y\n"
         "G = u, -v, -w\n"
         "R = 1\n"
         "integrals = I1: u*v, I2: u*w\n"
         "expected_F = x*(x*y + 3*y*z + x^2*z), y*(2*x*y + y*z - 3*x^2*z), z*(-4*x*y - 2*y*z + x^2*z)\n"
         "expected_H = H1: y*z*(x*z + x^2), H2: y*z*(x*z - y)\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = 0.2, 0.3, 0.4\n"
         "T = 2\n"},

        {"ex4_3", "Integrable Rossler system", "no free parameters",
         "vars = x, y, z\n"
         "phi = (x^2 + y^2)/2 + z, y, z\n"
         "G = 0, 1, w\n"
         "R = 1\n"
         "integrals = I1: u, I2: w*exp(-v)\n"
         "expected_F = -y - z, x, x*z\n"
         "expected_H = H1: (x^2 + y^2)/2 + z, H2: z*exp(-y)\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = 0.4, 0.3, 0.2\n"
         "T = 10\n"},

        {"ex4_4", "Rikitake system", "base point p = (1, 1, 0)",
         "vars = x, y, z\n"
         "base = 1, 1, 0\n"
         "phi = (x + y)/2, y - x, x^2 + z^2\n"
         "G = u/2, -v/2, 1\n"
         "R = 1\n"
         "integrals = I1: u*v, I2: v^2*exp(w)\n"
         "expected_F = y*z, x*z, 1 - x*y\n"
         "expected_H = H1: (y^2 - x^2)/2, H2: (y - x)^2*exp(x^2 + z^2)\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = 0.3, 0.5, 0.2\n"
         "T = 10\n"},

        {"ex4_5", "(a,b,c) Lotka-Volterra system", "a = 1, c = 2 (branch c >= 1); R = 1/(2z)",
         "vars = x, y, z\n"
         "phi = 2*z + 2*y + x, y, x*z^2\n"
         "G = 0, v, -w\n"
         "R = 1/(2*z)\n"
         "integrals = I1: u, I2: v*w\n"
         "expected_F = x*(z - 2*y), y*(x - z), z*(y - x/2)\n"
         "expected_H = H1: x + 2*y + 2*z, H2: x*y*z^2\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = 0.4, 0.3, 0.5\n"
         "T = 10\n"},

        {"ex4_6", "Degenerate map in space (rank-deficient Jacobian)", "no free parameters",
         "vars = x, y, z\n"
         "phi = x*z - y^2, y*z - y^2, x*z - y*z\n"
         "G = 0, 0, 1\n"
         "R = 1\n"
         "integrals = I1: u, I2: v\n"
         "expected_F = 2*x*y - x*z - 2*y^2, -y*z, -2*y*z + z^2\n"
         "expected_H = H1: x*z - y^2, H2: y*z - y^2\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = 0.4, 0.2, 0.3\n"
         "T = 2\n"},

        {"ex5_1", "4D Kolmogorov system", "l = 1",
         "vars = x1, x2, x3, x4\n"
         "phi = x1, x1*x3, x2*x4, x1 + x2 + x3 + x4\n"
         "G = 1, 0, 0, 0\n"
         "R = 1\n"
         "integrals = I1: u2, I2: u3, I3: u4\n"
         "expected_F = x1*(x2 - x4), x2*(x3 - x1), x3*(x4 - x2), x4*(x1 - x3)\n"
         "expected_H = H1: x1*x3, H2: x2*x4, H3: x1 + x2 + x3 + x4\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = 0.2, 0.3, 0.4, 0.5\n"
         "T = 10\n"},

        {"ex5_1b", "4D Kolmogorov system", "l = 2",
         "vars = x1, x2, x3, x4\n"
         "phi = x1, x1*x3, x2*x4, x1^2 + x2^2 + x3^2 + x4^2\n"
         "G = 1/2, 0, 0, 0\n"
         "R = 1\n"
         "integrals = I1: u2, I2: u3, I3: u4\n"
         "expected_F = x1*(x2^2 - x4^2), x2*(x3^2 - x1^2), x3*(x4^2 - x2^2), x4*(x1^2 - x3^2)\n"
         "expected_H = H1: x1*x3, H2: x2*x4, H3: x1^2 + x2^2 + x3^2 + x4^2\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = 0.2, 0.3, 0.4, 0.5\n"
         "T = 10\n"},

        {"ex5_2", "4D nilpotent system",
         "P1(s) = s+1, P2(s) = s+1, P3(s) = s, A_i(x1) = x1, d2 = d3 = 1",
         "vars = x1, x2, x3, x4\n"
         "phi = x1, x2 + x1, x3 + x1, x4 + x1\n"
         "G = u2 + 1, u3 + 1, u4, 0\n"
         "R = 1\n"
         "integrals = I: u4\n"
         "expected_F = x2 + x1 + 1, x3 - x2, x4 - x2 - 1, -x2 - x1 - 1\n"
         "expected_H = H: x4 + x1\n"
         "expect = PartiallyVerified\n"
         "x0 = 0.1, 0.2, 0.3, 0.4\n"
         "T = 5\n"},

        {"ex5_3", "n-dimensional Kolmogorov family", "n = 5, all optional G_i terms zero",
         "vars = x1, x2, x3, x4, x5\n"
         "phi = x1, x1*x2, x2*x3, x3*x4, x4*x5\n"
         "G = 0, 1, 1, 1, 0\n"
         "R = 1\n"
         "integrals = I1: u1, I2: u5, I3: u2 - u3, I4: u3 - u4\n"
         "expected_F = 0, x2*x3*x4, x3*(x1*x4 - x3*x4), x4*(x3*x4 - x1*x4 + x1*x2), x5*(x1*x4 - x1*x2 - x3*x4)\n"
         "expected_H = H1: x1, H2: x4*x5, H3: x1*x2 - x2*x3, H4: x2*x3 - x3*x4\n"
         "expect = CompletelyIntegrableVerified\n"
         "x0 = 0.2, 0.3, 0.4, 0.5, 0.6\n"
         "T = 5\n"},

        {"rem1_2i", "Constant-pullback counterexample", "k = 1",
         "vars = x, y\n"
         "phi = x, -x^2 + 1\n"
         "G = 1, 2*u\n"
         "R = 1\n"
         "integrals = I: u^2 + v\n"
         "expected_F = 0, 4*x\n"
         "expected_H = H: 1\n"
         "expect = Degenerate\n"
         "x0 = 0.5, 0.5\n"
         "T = 5\n"},

        {"rem1_2ii", "Collapsing-pullback counterexample", "no free parameters",
         "vars = x, y, z\n"
         "phi = y*z, y, z\n"
         "G = 0, v, -w\n"
         "R = 1\n"
         "integrals = I1: u, I2: v*w\n"
         "expected_F = 0, 0, 0\n"
         "expected_H = H1: y*z, H2: y*z\n"
         "expect = Degenerate\n"
         "x0 = 0.5, 0.5, 0.5\n"
         "T = 5\n"},
    };
    return defs;
}

}  // namespace detail

inline const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> out;
        for (const auto& def : detail::catalog_defs()) {
            CatalogEntry e;
            e.id = def.id;
            e.title = def.title;
            e.notes = def.notes;
            e.document = def.document;
            e.parsed = parse_system_file(e.document);
            out.push_back(std::move(e));
        }
        return out;
    }();
    return entries;
}

inline const CatalogEntry* catalog_find(const std::string& id) {
    for (const auto& e : catalog_entries())
        if (e.id == id) return &e;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Full pipeline for one entry: build, hypothesis check, pullback, verify,
// integrate.

struct CatalogRunResult {
    std::string id;
    BuildResult build;
    bool construction_ok = true;       // expected_F matched componentwise
    bool expected_h_ok = true;         // pullbacks matched declared expected_H
    VerificationReport report;
    DriftRecord drift;
    bool has_drift = false;
    std::optional<Classification> expected;
    bool meets_expectation = true;
};

// Pullbacks of the declared reduced integrals plus any extra expected_H
// entries as user-supplied integrals.
inline std::vector<FirstIntegral> collect_integrals(const SystemSpec& spec, const SamplePlan& plan) {
    std::vector<FirstIntegral> out;
    for (const auto& [label, reduced] : spec.reduced_integrals)
        out.push_back(pullback(spec, label, reduced, &plan));
    for (std::size_t i = spec.reduced_integrals.size(); i < spec.expected_h.size(); ++i) {
        FirstIntegral fi;
        fi.label = spec.expected_h[i].first;
        fi.h = spec.expected_h[i].second;
        fi.provenance = Provenance::UserSupplied;
        fi.constancy = is_constant(fi.h, spec.state_vars, plan);
        fi.degenerate_constant = fi.constancy.constant();
        out.push_back(std::move(fi));
    }
    return out;
}

inline CatalogRunResult catalog_run(const CatalogEntry& entry, std::uint64_t seed = 42,
                                    int samples = 200, double zero_tol = 1e-9) {
    const SystemSpec& spec = entry.parsed.spec;
    SamplePlan plan = spec.default_plan(seed, samples);
    plan.zero_tol = zero_tol;

    CatalogRunResult out;
    out.id = entry.id;
    out.expected = entry.parsed.expected;
    out.build = build_system(spec, &plan);
    out.construction_ok = out.build.all_match;

    VectorField field = effective_field(spec, out.build);
    std::vector<FirstIntegral> integrals = collect_integrals(spec, plan);

    // cross-check pullbacks against the declared closed forms
    std::size_t shared = std::min(spec.reduced_integrals.size(), spec.expected_h.size());
    for (std::size_t i = 0; i < shared; ++i)
        if (!expressions_match(integrals[i].h, spec.expected_h[i].second, spec.state_vars, plan))
            out.expected_h_ok = false;

    out.report = assemble_report(spec, field, integrals, plan, &out.build);

    if (!entry.parsed.x0.empty()) {
        TrajectoryRequest req;
        req.field = field;
        req.x0 = entry.parsed.x0;
        req.t_end = entry.parsed.t_end;
        Trajectory traj = integrate(req);
        out.drift = conservation_drift(traj, integrals);
        out.has_drift = true;
    }

    out.meets_expectation =
        out.construction_ok && out.expected_h_ok &&
        (!out.expected || static_cast<int>(out.report.classification) >= static_cast<int>(*out.expected));
    return out;
}

}  // namespace adjflow
