#include <catch2/catch.hpp>

#include "adjflow/report_io.hpp"
#include "helpers.hpp"

using namespace testutil;

TEST_CASE("report documents follow the versioned schema", "[report][schema]") {
    const CatalogEntry* entry = catalog_find("ex4_4");
    REQUIRE(entry != nullptr);
    CatalogRunResult run = catalog_run(*entry, 42, 200, 1e-9);
    Json doc = to_json(run, *entry);

    REQUIRE(doc["report"]["schema"] == "adjflow.report/1");
    for (const char* key : {"id", "title", "notes", "system", "built_field", "construction_ok",
                            "expected_h_ok", "report", "drift", "meets_expectation"})
        REQUIRE(doc.contains(key));
    for (const char* key : {"plan", "hypotheses", "integrals", "independence", "classification"})
        REQUIRE(doc["report"].contains(key));
    for (const char* key : {"seed", "samples", "zero_tol", "rank_tol"})
        REQUIRE(doc["report"]["plan"].contains(key));
    for (const char* key :
         {"base_point", "image_q", "g_at_q", "g_nonzero_at_q", "f_at_base", "singular_at_base",
          "r_nonzero", "det_dphi", "sufficient_condition_ok", "sufficient_condition_failed",
          "phi_class", "g_class", "r_class", "global_candidate"})
        REQUIRE(doc["report"]["hypotheses"].contains(key));
    for (const auto& rec : doc["report"]["integrals"])
        for (const char* key :
             {"label", "expression", "provenance", "class", "verdict", "lie_derivative", "constancy"})
            REQUIRE(rec.contains(key));

    REQUIRE(doc["report"]["plan"]["seed"] == 42);
    REQUIRE(doc["report"]["classification"] == "CompletelyIntegrableVerified");

    // parameter bindings surface in the document
    const CatalogEntry* with_params = catalog_find("ex3_4");
    Json pdoc = to_json(catalog_run(*with_params, 42, 200, 1e-9), *with_params);
    REQUIRE(pdoc["system"]["params"].contains("a"));
    REQUIRE(pdoc["system"]["params"]["a"]["definition"] == "sqrt(2) + 1");
}

TEST_CASE("catalog documents carry run configuration", "[report][schema]") {
    const CatalogEntry* entry = catalog_find("ex3_2");
    std::vector<std::pair<const CatalogEntry*, CatalogRunResult>> runs;
    runs.emplace_back(entry, catalog_run(*entry, 7, 100, 1e-8));
    Json doc = catalog_run_document(runs, 7, 100, 1e-8);
    REQUIRE(doc["schema"] == "adjflow.catalog-run/1");
    REQUIRE(doc["seed"] == 7);
    REQUIRE(doc["samples"] == 100);
    REQUIRE(doc["entries"].size() == 1);
    REQUIRE(doc["entries"][0]["id"] == "ex3_2");
}
