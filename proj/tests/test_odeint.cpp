#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace testutil;

namespace {

SystemSpec spec_from(const std::string& doc) { return parse_system_file(doc).spec; }

FirstIntegral plain_integral(const std::string& label, const Expr& h) {
    FirstIntegral fi;
    fi.label = label;
    fi.h = h;
    return fi;
}

DriftRecord drift_for(const VectorField& field, const std::vector<double>& x0, double t_end,
                      const std::vector<FirstIntegral>& hs, double rtol = 1e-10,
                      double atol = 1e-12) {
    TrajectoryRequest req;
    req.field = field;
    req.x0 = x0;
    req.t_end = t_end;
    req.rtol = rtol;
    req.atol = atol;
    Trajectory traj = integrate(req);
    return conservation_drift(traj, hs);
}

}  // namespace

TEST_CASE("linear motion integrates exactly", "[odeint]") {
    std::vector<std::string> xy = {"x", "y"};
    VectorField field{xy, {constant(0L), constant(1L)}};
    TrajectoryRequest req;
    req.field = field;
    req.x0 = {0.0, 0.0};
    req.t_end = 1.0;
    Trajectory traj = integrate(req);
    REQUIRE(traj.termination == Termination::ReachedEnd);
    REQUIRE(traj.times.back() == Approx(1.0).margin(1e-14));
    REQUIRE(traj.states.back()[0] == Approx(0.0).margin(1e-10));
    REQUIRE(traj.states.back()[1] == Approx(1.0).margin(1e-10));

    DriftRecord drift = conservation_drift(traj, {plain_integral("H", P("x", xy))});
    REQUIRE(drift.per_integral[0].drift == 0.0);
}

TEST_CASE("integrator rejects bad requests", "[odeint][errors]") {
    std::vector<std::string> xy = {"x", "y"};
    VectorField field{xy, {P("1/x", xy), constant(1L)}};
    TrajectoryRequest req;
    req.field = field;
    req.x0 = {0.0, 0.0};  // derivative is non-finite here
    REQUIRE_THROWS_AS(integrate(req), Error);

    VectorField ok{xy, {constant(0L), constant(1L)}};
    TrajectoryRequest bad;
    bad.field = ok;
    bad.x0 = {0.0};
    REQUIRE_THROWS_AS(integrate(bad), Error);
}

TEST_CASE("step budget terminates the trajectory", "[odeint]") {
    std::vector<std::string> xy = {"x", "y"};
    VectorField field{xy, {P("y", xy), P("-x", xy)}};
    TrajectoryRequest req;
    req.field = field;
    req.x0 = {1.0, 0.0};
    req.t_end = 1000.0;
    req.max_steps = 50;
    Trajectory traj = integrate(req);
    REQUIRE(traj.termination == Termination::MaxSteps);
    REQUIRE(traj.accepted + traj.rejected == 50);
}

TEST_CASE("blow-up guard terminates the trajectory", "[odeint]") {
    std::vector<std::string> x = {"x"};
    VectorField field{x, {P("x^2", x)}};  // finite-time blow-up from x0 = 1 at t = 1
    TrajectoryRequest req;
    req.field = field;
    req.x0 = {1.0};
    req.t_end = 2.0;
    req.bound = 1e6;
    Trajectory traj = integrate(req);
    REQUIRE(traj.termination == Termination::LeftBound);
    REQUIRE(std::fabs(traj.states.back()[0]) > 1e6);
}

TEST_CASE("Rikitake integrals drift below 1e-6", "[odeint][drift]") {
    std::vector<std::string> xyz = {"x", "y", "z"};
    VectorField field{xyz, {P("y*z", xyz), P("x*z", xyz), P("1 - x*y", xyz)}};
    DriftRecord drift = drift_for(field, {0.3, 0.5, 0.2}, 10.0,
                                  {plain_integral("H1", P("(y^2 - x^2)/2", xyz)),
                                   plain_integral("H2", P("(y - x)^2*exp(x^2 + z^2)", xyz))});
    REQUIRE(drift.termination == Termination::ReachedEnd);
    REQUIRE(drift.per_integral[0].drift <= 1e-6);
    REQUIRE(drift.per_integral[1].drift <= 1e-6);

    // a deliberately wrong integral shows large drift
    DriftRecord wrong = drift_for(field, {0.3, 0.5, 0.2}, 10.0, {plain_integral("W", P("x", xyz))});
    REQUIRE(wrong.per_integral[0].drift > 1e-3);
}

TEST_CASE("planar Kolmogorov orbit conserves its Darboux integral", "[odeint][drift]") {
    std::vector<std::string> xy = {"x", "y"};
    VectorField field{xy, {P("x*(-1 + x*y + y^2)", xy), P("y*(1 - x - x*y)", xy)}};
    DriftRecord drift = drift_for(field, {0.5, 0.5}, 10.0,
                                  {plain_integral("H", P("x*y*exp(-x - x*y - y^2/2)", xy))});
    REQUIRE(drift.termination == Termination::ReachedEnd);
    REQUIRE(drift.per_integral[0].drift <= 1e-6);
}

TEST_CASE("Rossler integrals drift below 1e-6", "[odeint][drift]") {
    std::vector<std::string> xyz = {"x", "y", "z"};
    VectorField field{xyz, {P("-y - z", xyz), P("x", xyz), P("x*z", xyz)}};
    DriftRecord drift = drift_for(field, {0.4, 0.3, 0.2}, 10.0,
                                  {plain_integral("H1", P("(x^2 + y^2)/2 + z", xyz)),
                                   plain_integral("H2", P("z*exp(-y)", xyz))});
    REQUIRE(drift.per_integral[0].drift <= 1e-6);
    REQUIRE(drift.per_integral[1].drift <= 1e-6);
}

TEST_CASE("refining tolerances never doubles the drift", "[odeint][property]") {
    // truncation-dominated regime: each halving of rtol/atol must not
    // increase measured drift by more than a factor of two
    std::vector<std::string> xyz = {"x", "y", "z"};
    VectorField field{xyz, {P("y*z", xyz), P("x*z", xyz), P("1 - x*y", xyz)}};
    std::vector<FirstIntegral> hs = {plain_integral("H1", P("(y^2 - x^2)/2", xyz))};
    double prev = -1;
    for (double rtol : {1e-5, 5e-6, 2.5e-6, 1.25e-6}) {
        DriftRecord rec = drift_for(field, {0.3, 0.5, 0.2}, 10.0, hs, rtol, rtol * 1e-2);
        double drift = rec.per_integral[0].drift;
        if (prev >= 0) REQUIRE(drift <= 2.0 * prev + 1e-12);
        prev = drift;
    }
}

TEST_CASE("time rescaling preserves orbits and conservation", "[odeint][property]") {
    // R in {1, 2} builds fields tracing the same level sets
    SystemSpec spec = spec_from(
        "vars = x, y\n"
        "phi = x*y, x + y^2/2\n"
        "G = u, 1 - u\n");
    std::vector<FirstIntegral> hs = {
        plain_integral("H", P("x*y*exp(-x - x*y - y^2/2)", spec.state_vars))};
    for (const char* rtext : {"1", "2"}) {
        SystemSpec variant = spec;
        variant.r = P(rtext, spec.state_vars);
        BuildResult build = build_system(variant);
        DriftRecord drift = drift_for(build.field, {0.5, 0.5}, 10.0, hs);
        INFO("R = " << rtext);
        REQUIRE(drift.per_integral[0].drift <= 1e-6);
    }
}
