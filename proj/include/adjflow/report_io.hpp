#pragma once

// Machine-readable report documents. The schema is versioned and the output
// is a pure function of (system, seed, tolerances): field order is fixed,
// doubles print as shortest round-trip decimals, so identical inputs produce
// byte-identical documents.

#include <json.hpp>

#include "adjflow/catalog.hpp"

namespace adjflow {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "adjflow.report/1";
inline constexpr const char* kCatalogRunSchema = "adjflow.catalog-run/1";

inline Json to_json(const std::vector<NumberVal>& vals) {
    Json arr = Json::array();
    for (const auto& v : vals) {
        Json o;
        if (v.exact) o["exact"] = rat_to_string(*v.exact);
        o["value"] = v.approx;
        arr.push_back(std::move(o));
    }
    return arr;
}

inline Json to_json(const ZeroVerdict& v) {
    Json o;
    o["kind"] = to_string(v.kind);
    if (v.kind == ZeroKind::ZeroNumeric || v.kind == ZeroKind::NonZero) {
        o["max_abs"] = v.max_abs;
        o["finite_samples"] = v.finite_samples;
        o["total_samples"] = v.total_samples;
    }
    if (!v.witness.empty()) {
        o["witness"] = v.witness;
        o["witness_value"] = v.witness_value;
    }
    if (!v.note.empty()) o["note"] = v.note;
    return o;
}

inline Json to_json(const ConstVerdict& v) {
    Json o;
    o["kind"] = to_string(v.kind);
    if (v.kind == ConstKind::ConstantNumeric || v.kind == ConstKind::NonConstant)
        o["spread"] = v.spread;
    if (!v.note.empty()) o["note"] = v.note;
    return o;
}

inline Json to_json(const HypothesisReport& h) {
    Json o;
    o["base_point"] = to_json(h.base_point);
    o["image_q"] = to_json(h.image_q);
    o["g_at_q"] = to_json(h.g_at_q);
    o["g_nonzero_at_q"] = h.g_nonzero_at_q;
    o["f_at_base"] = to_json(h.f_at_base);
    o["singular_at_base"] = h.singular_at_base;
    o["r_nonzero"] = to_json(h.r_nonzero);
    o["det_dphi"] = to_json(h.det_verdict);
    o["sufficient_condition_ok"] = h.sufficient_condition_ok;
    o["sufficient_condition_failed"] = h.sufficient_condition_failed;
    o["phi_class"] = to_string(h.phi_class);
    o["g_class"] = to_string(h.g_class);
    o["r_class"] = to_string(h.r_class);
    o["global_candidate"] = h.global_candidate;
    return o;
}

inline Json to_json(const IntegralRecord& r) {
    Json o;
    o["label"] = r.label;
    o["expression"] = r.expression;
    o["provenance"] = r.provenance == Provenance::Pullback ? "pullback" : "user-supplied";
    o["class"] = to_string(r.h_class);
    o["verdict"] = to_string(r.verdict);
    o["lie_derivative"] = to_json(r.lie_zero);
    o["constancy"] = to_json(r.constancy);
    return o;
}

inline Json to_json(const IndependenceRecord& r) {
    Json o;
    o["m"] = r.m;
    o["total_samples"] = r.total_samples;
    o["finite_samples"] = r.finite_samples;
    Json ranks;
    for (const auto& [rank, count] : r.rank_counts) ranks[std::to_string(rank)] = count;
    o["rank_counts"] = std::move(ranks);
    o["pass_fraction"] = r.pass_fraction;
    o["independent"] = r.independent;
    o["exact_path"] = r.exact_path;
    return o;
}

inline Json to_json(const VerificationReport& r) {
    Json o;
    o["schema"] = kReportSchema;
    o["plan"] = Json{{"seed", r.seed},
                     {"samples", r.samples},
                     {"zero_tol", r.zero_tol},
                     {"rank_tol", r.rank_tol}};
    o["hypotheses"] = to_json(r.hypotheses);
    Json ints = Json::array();
    for (const auto& rec : r.integrals) ints.push_back(to_json(rec));
    o["integrals"] = std::move(ints);
    if (r.independence) o["independence"] = to_json(*r.independence);
    o["classification"] = to_string(r.classification);
    return o;
}

inline Json to_json(const DriftRecord& d) {
    Json o;
    o["steps"] = d.steps;
    o["termination"] = to_string(d.termination);
    Json per;
    for (const auto& e : d.per_integral) {
        Json entry;
        entry["drift"] = e.drift;
        entry["finite"] = e.finite;
        per[e.label] = std::move(entry);
    }
    o["per_integral"] = std::move(per);
    return o;
}

inline Json system_to_json(const SystemSpec& spec) {
    Json o;
    o["vars"] = spec.state_vars;
    if (!spec.param_defs.empty()) {
        Json params;
        for (const auto& [name, def] : spec.param_defs) {
            params[name] = Json{{"definition", def}, {"value", spec.params.at(name)}};
        }
        o["params"] = std::move(params);
    }
    if (!spec.base_point.empty()) {
        Json base = Json::array();
        for (const auto& b : spec.base_point) base.push_back(rat_to_string(b));
        o["base"] = std::move(base);
    }
    Json phi = Json::array(), g = Json::array();
    for (const auto& e : spec.phi) phi.push_back(to_string(e));
    for (const auto& e : spec.g) g.push_back(to_string(e));
    o["phi"] = std::move(phi);
    o["G"] = std::move(g);
    o["R"] = to_string(spec.r);
    return o;
}

inline Json to_json(const CatalogRunResult& r, const CatalogEntry& entry) {
    Json o;
    o["id"] = r.id;
    o["title"] = entry.title;
    o["notes"] = entry.notes;
    o["system"] = system_to_json(entry.parsed.spec);
    Json built = Json::array();
    for (const auto& c : r.build.field.components) built.push_back(to_string(c));
    o["built_field"] = std::move(built);
    o["construction_ok"] = r.construction_ok;
    o["expected_h_ok"] = r.expected_h_ok;
    o["report"] = to_json(r.report);
    if (r.has_drift) o["drift"] = to_json(r.drift);
    if (r.expected) o["expected_classification"] = to_string(*r.expected);
    o["meets_expectation"] = r.meets_expectation;
    return o;
}

inline Json catalog_run_document(const std::vector<std::pair<const CatalogEntry*, CatalogRunResult>>& runs,
                                 std::uint64_t seed, int samples, double zero_tol) {
    Json o;
    o["schema"] = kCatalogRunSchema;
    o["seed"] = seed;
    o["samples"] = samples;
    o["zero_tol"] = zero_tol;
    Json entries = Json::array();
    for (const auto& [entry, run] : runs) entries.push_back(to_json(run, *entry));
    o["entries"] = std::move(entries);
    return o;
}

}  // namespace adjflow
