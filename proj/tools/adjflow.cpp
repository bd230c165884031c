// adjflow command-line front end.
//
// Subcommands:
//   construct -i FILE [-o OUT]       build the field, print its components
//   verify    -i FILE [options]      full verification report; exit 0 iff the
//                                    classification meets the file's `expect`
//   integrate -i FILE --x0 LIST      trajectory plus conservation drift
//   catalog   list | run ID | run --all | export ID
//
// Exit codes: 0 success, 1 verification failure, 2 input or parse errors.
// ADJFLOW_SEED overrides the default seed (42) when --seed is not given.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "adjflow/adjflow.hpp"

namespace {

using namespace adjflow;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("ADJFLOW_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            std::cerr << "warning: ignoring malformed ADJFLOW_SEED\n";
        }
    }
    return 42;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

std::vector<double> parse_x0(const std::string& text, int n) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ','))
        out.push_back(eval_double(parse_expression(piece, {}), {}, {}));
    if (static_cast<int>(out.size()) != n)
        throw Error("--x0 needs " + std::to_string(n) + " comma-separated values");
    return out;
}

void print_report(std::ostream& os, const VerificationReport& rep) {
    const auto& h = rep.hypotheses;
    os << "hypotheses:\n";
    os << "  image q = phi(p): [";
    for (std::size_t i = 0; i < h.image_q.size(); ++i) os << (i ? ", " : "") << h.image_q[i].str();
    os << "]\n";
    os << "  G(q) nonzero:     " << (h.g_nonzero_at_q ? "yes" : "no") << "\n";
    os << "  F(p) = 0:         " << (h.singular_at_base ? "yes" : "no") << "\n";
    os << "  R nonzero a.e.:   " << to_string(h.r_nonzero.kind) << "\n";
    os << "  det(Dphi):        " << to_string(h.det_verdict.kind)
       << (h.sufficient_condition_failed ? "  [SufficientConditionFailed]" : "") << "\n";
    os << "  classes:          phi " << to_string(h.phi_class) << ", G " << to_string(h.g_class)
       << ", R " << to_string(h.r_class) << (h.global_candidate ? "  [global candidate]" : "")
       << "\n";
    for (const auto& rec : rep.integrals) {
        os << "integral " << rec.label << " = " << rec.expression << "\n";
        os << "  verdict: " << to_string(rec.verdict);
        if (rec.lie_zero.kind == ZeroKind::ZeroNumeric)
            os << "  (max |dH/dt| = " << rec.lie_zero.max_abs << " over "
               << rec.lie_zero.finite_samples << " samples)";
        os << "\n";
    }
    if (rep.independence) {
        const auto& ind = *rep.independence;
        os << "independence: rank " << ind.m << " at " << 100.0 * ind.pass_fraction
           << "% of " << ind.finite_samples << " finite samples ("
           << (ind.exact_path ? "exact" : "numeric") << ") -> "
           << (ind.independent ? "independent" : "dependent") << "\n";
    }
    os << "classification: " << to_string(rep.classification) << "\n";
}

struct VerifyOutcome {
    VerificationReport report;
    BuildResult build;
    std::vector<FirstIntegral> integrals;
    SamplePlan plan;
};

VerifyOutcome run_verification(const ParsedSystemFile& file, std::uint64_t seed, int samples,
                               double tol) {
    VerifyOutcome out;
    out.plan = file.spec.default_plan(seed, samples);
    out.plan.zero_tol = tol;
    out.build = build_system(file.spec, &out.plan);
    VectorField field = effective_field(file.spec, out.build);
    out.integrals = collect_integrals(file.spec, out.plan);
    out.report = assemble_report(file.spec, field, out.integrals, out.plan, &out.build);
    return out;
}

int cmd_construct(const std::string& input, const std::string& output) {
    ParsedSystemFile file = parse_system_file(read_file(input));
    BuildResult build = build_system(file.spec);
    for (int i = 0; i < build.field.n(); ++i) {
        const auto& name = file.spec.state_vars[static_cast<std::size_t>(i)];
        const Expr& comp = build.field.components[static_cast<std::size_t>(i)];
        std::cout << name << "' = " << to_string(comp);
        auto nf = to_poly_nf(comp, file.spec.state_vars);
        if (nf) std::cout << "   [= " << nf->to_string() << "]";
        std::cout << "\n";
    }
    bool ok = true;
    for (const auto& check : build.expected_match) {
        if (!check.verdict.zero()) {
            ok = false;
            std::cerr << "component " << check.index << " does not match expected_F ("
                      << to_string(check.verdict.kind) << ")\n";
        }
    }
    if (!build.expected_match.empty())
        std::cout << (ok ? "matches expected_F" : "MISMATCH against expected_F") << "\n";
    if (!output.empty()) {
        Json doc;
        doc["schema"] = "adjflow.construct/1";
        doc["system"] = system_to_json(file.spec);
        Json comps = Json::array();
        for (const auto& c : build.field.components) comps.push_back(to_string(c));
        doc["field"] = std::move(comps);
        doc["det_dphi"] = to_string(build.det_dphi);
        doc["matches_expected"] = ok;
        write_output(output, doc.dump(2) + "\n");
    }
    return ok ? 0 : 1;
}

int cmd_verify(const std::string& input, std::uint64_t seed, int samples, double tol,
               const std::string& output, bool json_stdout) {
    ParsedSystemFile file = parse_system_file(read_file(input));
    VerifyOutcome out = run_verification(file, seed, samples, tol);

    Json doc = to_json(out.report);
    doc["system"] = system_to_json(file.spec);
    if (json_stdout)
        std::cout << doc.dump(2) << "\n";
    else
        print_report(std::cout, out.report);
    if (!output.empty()) write_output(output, doc.dump(2) + "\n");

    bool construction_ok = out.build.all_match;
    if (!construction_ok) std::cerr << "built field does not match expected_F\n";
    bool ok = construction_ok &&
              (!file.expected || static_cast<int>(out.report.classification) >=
                                     static_cast<int>(*file.expected));
    return ok ? 0 : 1;
}

int cmd_integrate(const std::string& input, const std::string& x0_text, double t_end, double rtol,
                  double atol, const std::string& output) {
    ParsedSystemFile file = parse_system_file(read_file(input));
    BuildResult build = build_system(file.spec);
    VectorField field = effective_field(file.spec, build);

    TrajectoryRequest req;
    req.field = field;
    req.x0 = x0_text.empty() ? file.x0 : parse_x0(x0_text, file.spec.n());
    if (req.x0.empty()) throw Error("no initial state: pass --x0 or add x0 to the file");
    req.t_end = t_end > 0 ? t_end : file.t_end;
    req.rtol = rtol;
    req.atol = atol;

    Trajectory traj = integrate(req);
    SamplePlan plan = file.spec.default_plan(default_seed());
    std::vector<FirstIntegral> integrals = collect_integrals(file.spec, plan);
    DriftRecord drift = conservation_drift(traj, integrals);

    std::cout << "steps: " << traj.accepted << " accepted, " << traj.rejected << " rejected ("
              << to_string(traj.termination) << ")\n";
    const auto& final_state = traj.states.back();
    std::cout << "final state at t = " << traj.times.back() << ": [";
    for (std::size_t i = 0; i < final_state.size(); ++i)
        std::cout << (i ? ", " : "") << final_state[i];
    std::cout << "]\n";
    for (const auto& e : drift.per_integral)
        std::cout << "drift " << e.label << ": " << e.drift << (e.finite ? "" : " (non-finite)")
                  << "\n";

    if (!output.empty()) {
        Json doc;
        doc["schema"] = "adjflow.trajectory/1";
        doc["x0"] = req.x0;
        doc["t_end"] = req.t_end;
        doc["rtol"] = req.rtol;
        doc["atol"] = req.atol;
        doc["steps"] = traj.accepted;
        doc["termination"] = to_string(traj.termination);
        doc["drift"] = to_json(drift);
        Json points = Json::array();
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            Json p;
            p["t"] = traj.times[i];
            p["x"] = traj.states[i];
            points.push_back(std::move(p));
        }
        doc["trajectory"] = std::move(points);
        write_output(output, doc.dump(2) + "\n");
    }
    return 0;
}

int cmd_catalog_list() {
    for (const auto& e : catalog_entries()) {
        std::cout << e.id;
        for (std::size_t pad = e.id.size(); pad < 10; ++pad) std::cout << ' ';
        std::cout << e.title << "  (" << e.notes << ")\n";
    }
    return 0;
}

int cmd_catalog_run(const std::string& id, bool all, std::uint64_t seed, int samples, double tol) {
    std::vector<const CatalogEntry*> selected;
    if (all) {
        for (const auto& e : catalog_entries()) selected.push_back(&e);
    } else {
        const CatalogEntry* e = catalog_find(id);
        if (!e) {
            std::cerr << "unknown catalog id: " << id << "\n";
            return 2;
        }
        selected.push_back(e);
    }
    std::vector<std::pair<const CatalogEntry*, CatalogRunResult>> runs;
    bool ok = true;
    for (const CatalogEntry* e : selected) {
        CatalogRunResult run = catalog_run(*e, seed, samples, tol);
        ok = ok && run.meets_expectation;
        std::cerr << e->id << ": " << to_string(run.report.classification)
                  << (run.construction_ok ? "" : " [construction mismatch]")
                  << (run.meets_expectation ? "" : " [expectation NOT met]") << "\n";
        runs.emplace_back(e, std::move(run));
    }
    std::cout << catalog_run_document(runs, seed, samples, tol).dump(2) << "\n";
    return ok ? 0 : 1;
}

int cmd_catalog_export(const std::string& id, const std::string& output) {
    const CatalogEntry* e = catalog_find(id);
    if (!e) {
        std::cerr << "unknown catalog id: " << id << "\n";
        return 2;
    }
    if (output.empty())
        std::cout << e->document;
    else
        write_output(output, e->document);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adjflow: construct differential systems from reduced ones and verify their first integrals"};
    app.require_subcommand(1);

    std::string input, output, x0_text, catalog_id;
    std::uint64_t seed = default_seed();
    int samples = 200;
    double tol = 1e-9, t_end = 0, rtol = 1e-10, atol = 1e-12;
    bool run_all = false, json_stdout = false;

    auto* construct = app.add_subcommand("construct", "build the field from a system file");
    construct->add_option("-i,--input", input, "system file")->required();
    construct->add_option("-o,--output", output, "machine-readable output file");

    auto* verify = app.add_subcommand("verify", "run the verification pipeline");
    verify->add_option("-i,--input", input, "system file")->required();
    verify->add_option("--samples", samples, "samples per numeric test");
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--tol", tol, "numeric zero tolerance");
    verify->add_option("-o,--output", output, "machine-readable output file");
    verify->add_flag("--json", json_stdout, "print the JSON report to stdout");

    auto* integrate_cmd = app.add_subcommand("integrate", "integrate a trajectory and measure drift");
    integrate_cmd->add_option("-i,--input", input, "system file")->required();
    integrate_cmd->add_option("--x0", x0_text, "initial state (comma-separated)");
    integrate_cmd->add_option("--t", t_end, "integration horizon");
    integrate_cmd->add_option("--rtol", rtol, "relative tolerance");
    integrate_cmd->add_option("--atol", atol, "absolute tolerance");
    integrate_cmd->add_option("-o,--output", output, "machine-readable output file");

    auto* catalog = app.add_subcommand("catalog", "work with the built-in corpus");
    catalog->require_subcommand(1);
    catalog->add_subcommand("list", "list entries");
    auto* run = catalog->add_subcommand("run", "run the pipeline for an entry");
    run->add_option("id", catalog_id, "entry id");
    run->add_flag("--all", run_all, "run every entry");
    run->add_option("--seed", seed, "RNG seed");
    run->add_option("--samples", samples, "samples per numeric test");
    run->add_option("--tol", tol, "numeric zero tolerance");
    auto* exp = catalog->add_subcommand("export", "print an entry as a system file");
    exp->add_option("id", catalog_id, "entry id")->required();
    exp->add_option("-o,--output", output, "output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (construct->parsed()) return cmd_construct(input, output);
        if (verify->parsed()) return cmd_verify(input, seed, samples, tol, output, json_stdout);
        if (integrate_cmd->parsed())
            return cmd_integrate(input, x0_text, t_end, rtol, atol, output);
        if (catalog->parsed()) {
            if (catalog->get_subcommand("list")->parsed()) return cmd_catalog_list();
            if (run->parsed()) {
                if (!run_all && catalog_id.empty()) {
                    std::cerr << "catalog run: give an entry id or --all\n";
                    return 2;
                }
                return cmd_catalog_run(catalog_id, run_all, seed, samples, tol);
            }
            if (exp->parsed()) return cmd_catalog_export(catalog_id, output);
        }
    } catch (const SysFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
