#pragma once

// Line-oriented `key = value` system files.
//
//   vars       = x, y, z            state variable names
//   base       = 1, 1, 0            base point p (default: origin)
//   param a    = sqrt(2) + 1        opaque named constant (optional, repeatable)
//   phi        = (x+y)/2, y-x, x^2+z^2
//   G          = u/2, -v/2, 1       components over u1..un (aliases u,v,w,s for n<=4)
//   R          = 1                  optional, default 1
//   integrals  = I1: u*v, I2: v^2*exp(w)        reduced-system first integrals
//   expected_F = y*z, x*z, 1 - x*y              optional
//   expected_H = H1: (y^2-x^2)/2, ...           optional
//   expect     = CompletelyIntegrableVerified   optional expected classification
//   x0         = 0.3, 0.5, 0.2                  optional drift initial state
//   T          = 10                             optional drift horizon
//
// `#` starts a comment; values split on top-level commas.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adjflow/parser.hpp"
#include "adjflow/verify.hpp"

namespace adjflow {

struct SysFileError : Error {
    int line;
    SysFileError(const std::string& msg, int line_no)
        : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

struct ParsedSystemFile {
    SystemSpec spec;
    std::optional<Classification> expected;
    std::vector<double> x0;
    double t_end = 10.0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_top_level(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

// "label: expr" with the label optional.
inline std::pair<std::string, std::string> split_label(const std::string& s, const std::string& fallback) {
    std::size_t colon = s.find(':');
    if (colon == std::string::npos) return {fallback, trim(s)};
    return {trim(s.substr(0, colon)), trim(s.substr(colon + 1))};
}

inline bool valid_identifier(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

}  // namespace detail

inline ParsedSystemFile parse_system_file(const std::string& text) {
    using detail::split_label;
    using detail::split_top_level;
    using detail::trim;

    struct RawEntry {
        std::string value;
        int line;
    };
    std::map<std::string, RawEntry> raw;
    std::vector<std::pair<std::string, RawEntry>> params_raw;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw SysFileError("expected `key = value`", line_no);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.rfind("param", 0) == 0 && key.size() > 5) {
            std::string name = trim(key.substr(5));
            if (!detail::valid_identifier(name)) throw SysFileError("bad parameter name", line_no);
            params_raw.emplace_back(name, RawEntry{value, line_no});
            continue;
        }
        if (raw.count(key)) throw SysFileError("duplicate key `" + key + "`", line_no);
        raw[key] = {value, line_no};
    }

    static const std::set<std::string> known = {"vars", "base", "phi", "G", "R", "integrals",
                                                "expected_F", "expected_H", "expect", "x0", "T"};
    for (const auto& [key, entry] : raw)
        if (!known.count(key)) throw SysFileError("unknown key `" + key + "`", entry.line);

    auto require = [&](const char* key) -> const RawEntry& {
        auto it = raw.find(key);
        if (it == raw.end()) throw SysFileError(std::string("missing key `") + key + "`", line_no);
        return it->second;
    };

    ParsedSystemFile out;
    SystemSpec& spec = out.spec;

    const RawEntry& vars_entry = require("vars");
    for (const auto& v : split_top_level(vars_entry.value)) {
        if (!detail::valid_identifier(v)) throw SysFileError("bad variable name `" + v + "`", vars_entry.line);
        if (var_index(spec.state_vars, v) >= 0)
            throw SysFileError("duplicate variable `" + v + "`", vars_entry.line);
        spec.state_vars.push_back(v);
    }
    int n = spec.n();
    spec.reduced_vars = canonical_reduced_vars(n);
    auto aliases = reduced_var_aliases(n);

    // parameters: constant expressions, evaluated in order of declaration
    for (const auto& [name, entry] : params_raw) {
        try {
            Expr def = parse_expression(entry.value, {}, spec.params);
            spec.params[name] = eval_double(def, {}, {});
            spec.param_defs[name] = entry.value;
        } catch (const ParseError& e) {
            throw SysFileError(std::string("param ") + name + ": " + e.what(), entry.line);
        }
    }

    auto parse_list = [&](const RawEntry& entry, const std::vector<std::string>& vars,
                          const char* what) {
        std::vector<Expr> comps;
        auto pieces = split_top_level(entry.value);
        if (static_cast<int>(pieces.size()) != n)
            throw SysFileError(std::string(what) + " needs " + std::to_string(n) + " components", entry.line);
        for (const auto& p : pieces) {
            try {
                comps.push_back(parse_expression(p, vars, spec.params, aliases));
            } catch (const ParseError& e) {
                throw SysFileError(std::string(what) + ": " + e.what(), entry.line);
            }
        }
        return comps;
    };

    spec.phi = parse_list(require("phi"), spec.state_vars, "phi");
    spec.g = parse_list(require("G"), spec.reduced_vars, "G");

    if (raw.count("R")) {
        const RawEntry& entry = raw.at("R");
        try {
            spec.r = parse_expression(entry.value, spec.state_vars, spec.params);
        } catch (const ParseError& e) {
            throw SysFileError(std::string("R: ") + e.what(), entry.line);
        }
    }

    if (raw.count("base")) {
        const RawEntry& entry = raw.at("base");
        for (const auto& p : split_top_level(entry.value)) {
            try {
                Expr e = parse_expression(p, {}, spec.params);
                auto v = eval_exact(e, {}, {});
                if (!v) throw SysFileError("base point must be exact rational", entry.line);
                spec.base_point.push_back(*v);
            } catch (const ParseError& err) {
                throw SysFileError(std::string("base: ") + err.what(), entry.line);
            }
        }
        if (static_cast<int>(spec.base_point.size()) != n)
            throw SysFileError("base needs n coordinates", entry.line);
    }

    if (raw.count("integrals")) {
        const RawEntry& entry = raw.at("integrals");
        int k = 0;
        for (const auto& piece : split_top_level(entry.value)) {
            ++k;
            auto [label, body] = split_label(piece, "I" + std::to_string(k));
            try {
                spec.reduced_integrals.emplace_back(
                    label, parse_expression(body, spec.reduced_vars, spec.params, aliases));
            } catch (const ParseError& e) {
                throw SysFileError(std::string("integrals: ") + e.what(), entry.line);
            }
        }
    }

    if (raw.count("expected_F")) spec.expected_f = parse_list(raw.at("expected_F"), spec.state_vars, "expected_F");

    if (raw.count("expected_H")) {
        const RawEntry& entry = raw.at("expected_H");
        int k = 0;
        for (const auto& piece : split_top_level(entry.value)) {
            ++k;
            auto [label, body] = split_label(piece, "H" + std::to_string(k));
            try {
                spec.expected_h.emplace_back(label,
                                             parse_expression(body, spec.state_vars, spec.params));
            } catch (const ParseError& e) {
                throw SysFileError(std::string("expected_H: ") + e.what(), entry.line);
            }
        }
    }

    if (raw.count("expect")) {
        const RawEntry& entry = raw.at("expect");
        auto c = classification_from_string(entry.value);
        if (!c) throw SysFileError("unknown classification `" + entry.value + "`", entry.line);
        out.expected = *c;
    }

    if (raw.count("x0")) {
        const RawEntry& entry = raw.at("x0");
        for (const auto& p : split_top_level(entry.value)) {
            try {
                out.x0.push_back(eval_double(parse_expression(p, {}, spec.params), {}, {}));
            } catch (const ParseError& e) {
                throw SysFileError(std::string("x0: ") + e.what(), entry.line);
            }
        }
        if (static_cast<int>(out.x0.size()) != n) throw SysFileError("x0 needs n coordinates", entry.line);
    }

    if (raw.count("T")) {
        const RawEntry& entry = raw.at("T");
        try {
            out.t_end = eval_double(parse_expression(entry.value, {}, spec.params), {}, {});
        } catch (const ParseError& e) {
            throw SysFileError(std::string("T: ") + e.what(), entry.line);
        }
        if (!(out.t_end > 0)) throw SysFileError("T must be positive", entry.line);
    }

    spec.validate();
    return out;
}

inline std::string serialize_system_file(const ParsedSystemFile& f) {
    std::ostringstream os;
    auto join_exprs = [](const std::vector<Expr>& es) {
        std::string s;
        for (std::size_t i = 0; i < es.size(); ++i) {
            if (i) s += ", ";
            s += to_string(es[i]);
        }
        return s;
    };
    const SystemSpec& spec = f.spec;
    os << "vars = ";
    for (std::size_t i = 0; i < spec.state_vars.size(); ++i)
        os << (i ? ", " : "") << spec.state_vars[i];
    os << "\n";
    for (const auto& [name, def] : spec.param_defs) os << "param " << name << " = " << def << "\n";
    if (!spec.base_point.empty()) {
        os << "base = ";
        for (std::size_t i = 0; i < spec.base_point.size(); ++i)
            os << (i ? ", " : "") << rat_to_string(spec.base_point[i]);
        os << "\n";
    }
    os << "phi = " << join_exprs(spec.phi) << "\n";
    os << "G = " << join_exprs(spec.g) << "\n";
    os << "R = " << to_string(spec.r) << "\n";
    if (!spec.reduced_integrals.empty()) {
        os << "integrals = ";
        for (std::size_t i = 0; i < spec.reduced_integrals.size(); ++i)
            os << (i ? ", " : "") << spec.reduced_integrals[i].first << ": "
               << to_string(spec.reduced_integrals[i].second);
        os << "\n";
    }
    if (!spec.expected_f.empty()) os << "expected_F = " << join_exprs(spec.expected_f) << "\n";
    if (!spec.expected_h.empty()) {
        os << "expected_H = ";
        for (std::size_t i = 0; i < spec.expected_h.size(); ++i)
            os << (i ? ", " : "") << spec.expected_h[i].first << ": "
               << to_string(spec.expected_h[i].second);
        os << "\n";
    }
    if (f.expected) os << "expect = " << to_string(*f.expected) << "\n";
    if (!f.x0.empty()) {
        os << "x0 = ";
        for (std::size_t i = 0; i < f.x0.size(); ++i) {
            std::ostringstream num;
            num.precision(17);
            num << f.x0[i];
            os << (i ? ", " : "") << num.str();
        }
        os << "\n";
    }
    std::ostringstream tnum;
    tnum.precision(17);
    tnum << f.t_end;
    os << "T = " << tnum.str() << "\n";
    return os.str();
}

}  // namespace adjflow
