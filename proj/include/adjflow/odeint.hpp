#pragma once

// Adaptive embedded Runge-Kutta 5(4) trajectory integration and
// conservation-drift measurement.
//
// The tableau is the Dormand-Prince 5(4) pair (FSAL). Coefficients are
// hard-coded as exact rational literals:
//
//   c  = 0, 1/5, 3/10, 4/5, 8/9, 1, 1
//   a2 = 1/5
//   a3 = 3/40, 9/40
//   a4 = 44/45, -56/15, 32/9
//   a5 = 19372/6561, -25360/2187, 64448/6561, -212/729
//   a6 = 9017/3168, -355/33, 46732/5247, 49/176, -5103/18656
//   b  = 35/384, 0, 500/1113, 125/192, -2187/6784, 11/84, 0       (order 5)
//   b* = 5179/57600, 0, 7571/16695, 393/640, -92097/339200,
//        187/2100, 1/40                                           (order 4)

#include <cmath>
#include <string>
#include <vector>

#include "adjflow/verify.hpp"

namespace adjflow {

struct TrajectoryRequest {
    VectorField field;
    std::vector<double> x0;
    double t_end = 10.0;
    double rtol = 1e-10;
    double atol = 1e-12;
    long max_steps = 1000000;
    double bound = 1e6;  // blow-up guard: stop when any |x_i| exceeds this
};

enum class Termination { ReachedEnd, MaxSteps, LeftBound, StepUnderflow };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::ReachedEnd: return "reached_end";
        case Termination::MaxSteps: return "max_steps";
        case Termination::LeftBound: return "left_bound";
        case Termination::StepUnderflow: return "step_underflow";
    }
    return "?";
}

struct Trajectory {
    std::vector<std::string> state_vars;
    std::vector<double> times;
    std::vector<std::vector<double>> states;  // accepted steps, x0 first
    long accepted = 0;
    long rejected = 0;
    Termination termination = Termination::ReachedEnd;
};

inline Trajectory integrate(const TrajectoryRequest& req) {
    const int n = req.field.n();
    if (static_cast<int>(req.x0.size()) != n) throw Error("integrate: x0 dimension mismatch");
    if (req.t_end <= 0) throw Error("integrate: t_end must be positive");
    if (req.rtol <= 0 || req.atol <= 0) throw Error("integrate: tolerances must be positive");

    auto deriv = [&](const std::vector<double>& x, std::vector<double>& out) {
        for (int i = 0; i < n; ++i)
            out[static_cast<std::size_t>(i)] =
                eval_double(req.field.components[static_cast<std::size_t>(i)],
                            req.field.state_vars, x);
    };

    static const double a2[] = {1.0 / 5};
    static const double a3[] = {3.0 / 40, 9.0 / 40};
    static const double a4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
    static const double a5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
    static const double a6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                                -5103.0 / 18656};
    static const double b5[] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                                11.0 / 84, 0.0};
    static const double b4[] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                                -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    Trajectory traj;
    traj.state_vars = req.field.state_vars;
    std::vector<double> x = req.x0;
    double t = 0.0;

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> xs(n), x5(n), x4(n);

    deriv(x, k1);
    for (double v : k1)
        if (!std::isfinite(v)) throw Error("integrate: non-finite derivative at initial state");

    traj.times.push_back(t);
    traj.states.push_back(x);

    double h = req.t_end / 100.0;

    // k1 always holds f(x) for the current accepted state (FSAL invariant).
    while (t < req.t_end) {
        if (traj.accepted + traj.rejected >= req.max_steps) {
            traj.termination = Termination::MaxSteps;
            return traj;
        }
        if (h < 1e-14) {
            traj.termination = Termination::StepUnderflow;
            return traj;
        }
        if (t + h > req.t_end) h = req.t_end - t;

        auto stage = [&](const double* a, int len, std::vector<double>& k) {
            const std::vector<double>* ks[] = {&k1, &k2, &k3, &k4, &k5, &k6};
            for (int i = 0; i < n; ++i) {
                double acc = 0;
                for (int s = 0; s < len; ++s) acc += a[s] * (*ks[s])[static_cast<std::size_t>(i)];
                xs[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + h * acc;
            }
            deriv(xs, k);
        };
        stage(a2, 1, k2);
        stage(a3, 2, k3);
        stage(a4, 3, k4);
        stage(a5, 4, k5);
        stage(a6, 5, k6);
        for (int i = 0; i < n; ++i) {
            double acc5 = 0, acc4 = 0;
            const std::vector<double>* ks[] = {&k1, &k2, &k3, &k4, &k5, &k6};
            for (int s = 0; s < 6; ++s) {
                acc5 += b5[s] * (*ks[s])[static_cast<std::size_t>(i)];
                acc4 += b4[s] * (*ks[s])[static_cast<std::size_t>(i)];
            }
            x5[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + h * acc5;
            x4[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + h * acc4;
        }
        deriv(x5, k7);  // FSAL stage; b4 has a k7 weight
        for (int i = 0; i < n; ++i)
            x4[static_cast<std::size_t>(i)] += h * (1.0 / 40) * k7[static_cast<std::size_t>(i)];

        double err = 0;
        bool finite = true;
        for (int i = 0; i < n; ++i) {
            double vi5 = x5[static_cast<std::size_t>(i)], vi4 = x4[static_cast<std::size_t>(i)];
            if (!std::isfinite(vi5) || !std::isfinite(vi4)) {
                finite = false;
                break;
            }
            double scale = req.atol + req.rtol * std::max(std::fabs(x[static_cast<std::size_t>(i)]),
                                                          std::fabs(vi5));
            double d = (vi5 - vi4) / scale;
            err += d * d;
        }
        err = finite ? std::sqrt(err / n) : 1e10;

        if (err <= 1.0) {
            t += h;
            x = x5;
            std::swap(k1, k7);  // first-same-as-last
            traj.times.push_back(t);
            traj.states.push_back(x);
            ++traj.accepted;
            for (int i = 0; i < n; ++i) {
                if (std::fabs(x[static_cast<std::size_t>(i)]) > req.bound) {
                    traj.termination = Termination::LeftBound;
                    return traj;
                }
            }
        } else {
            ++traj.rejected;
        }
        double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::min(5.0, std::max(0.2, factor));
    }
    traj.termination = Termination::ReachedEnd;
    return traj;
}

// ---------------------------------------------------------------------------
// Conservation drift.

struct DriftEntry {
    std::string label;
    double drift = 0;       // max over steps of |H(x(t)) - H(x0)| / max(1, |H(x0)|)
    bool finite = true;     // false when H was non-finite somewhere on the orbit
};

struct DriftRecord {
    std::vector<DriftEntry> per_integral;
    long steps = 0;
    Termination termination = Termination::ReachedEnd;

    double max_drift() const {
        double m = 0;
        for (const auto& e : per_integral) m = std::max(m, e.drift);
        return m;
    }
};

inline DriftRecord conservation_drift(const Trajectory& traj,
                                      const std::vector<FirstIntegral>& integrals) {
    if (traj.states.empty()) throw Error("conservation_drift: empty trajectory");
    DriftRecord rec;
    rec.steps = traj.accepted;
    rec.termination = traj.termination;
    for (const auto& fi : integrals) {
        DriftEntry entry;
        entry.label = fi.label;
        double h0 = eval_double(fi.h, traj.state_vars, traj.states.front());
        if (!std::isfinite(h0)) {
            entry.finite = false;
            rec.per_integral.push_back(entry);
            continue;
        }
        double denom = std::max(1.0, std::fabs(h0));
        for (const auto& state : traj.states) {
            double hv = eval_double(fi.h, traj.state_vars, state);
            if (!std::isfinite(hv)) {
                entry.finite = false;
                break;
            }
            entry.drift = std::max(entry.drift, std::fabs(hv - h0) / denom);
        }
        rec.per_integral.push_back(entry);
    }
    return rec;
}

}  // namespace adjflow
