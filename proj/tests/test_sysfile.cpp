#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace testutil;

TEST_CASE("system files parse with defaults", "[sysfile]") {
    ParsedSystemFile f = parse_system_file(
        "# comment line\n"
        "vars = x, y   # trailing comment\n"
        "phi = x*y, x + y^2/2\n"
        "G = u, 1 - u\n");
    REQUIRE(f.spec.state_vars == std::vector<std::string>{"x", "y"});
    REQUIRE(f.spec.reduced_vars == std::vector<std::string>{"u1", "u2"});
    REQUIRE(structurally_equal(f.spec.r, constant(1L)));  // R defaults to 1
    REQUIRE(f.spec.base_point.empty());                   // base defaults to the origin
    REQUIRE(f.spec.base() == std::vector<Rat>{Rat(0), Rat(0)});
    REQUIRE(!f.expected);
    REQUIRE(f.t_end == 10.0);
}

TEST_CASE("reduced-variable aliases resolve to canonical names", "[sysfile]") {
    ParsedSystemFile f = parse_system_file(
        "vars = x, y, z\n"
        "phi = x, y, z\n"
        "G = u, v - w, w\n"
        "integrals = I: u*v\n");
    std::set<std::string> used;
    free_vars(f.spec.g[1], used);
    REQUIRE(used == std::set<std::string>{"u2", "u3"});
    free_vars(f.spec.reduced_integrals[0].second, used);
    REQUIRE(used.count("u1") == 1);

    // aliases only exist up to dimension four
    REQUIRE_THROWS_AS(parse_system_file("vars = x1, x2, x3, x4, x5\n"
                                        "phi = x1, x2, x3, x4, x5\n"
                                        "G = u, 0, 0, 0, 0\n"),
                      SysFileError);
}

TEST_CASE("labels, expectations and drift data", "[sysfile]") {
    ParsedSystemFile f = parse_system_file(
        "vars = x, y\n"
        "base = 1/2, -0.25\n"
        "phi = x*y, x + y^2/2\n"
        "G = u, 1 - u\n"
        "R = 2\n"
        "integrals = mine: u*exp(-u - v), u^2\n"
        "expected_H = first: x, x^2\n"
        "expect = PartiallyVerified\n"
        "x0 = 0.5, 0.5\n"
        "T = 3\n");
    REQUIRE(f.spec.base_point == std::vector<Rat>{make_rat(1, 2), make_rat(-1, 4)});
    REQUIRE(f.spec.reduced_integrals.size() == 2);
    REQUIRE(f.spec.reduced_integrals[0].first == "mine");
    REQUIRE(f.spec.reduced_integrals[1].first == "I2");  // auto label
    REQUIRE(f.spec.expected_h[0].first == "first");
    REQUIRE(f.spec.expected_h[1].first == "H2");
    REQUIRE(f.expected == Classification::PartiallyVerified);
    REQUIRE(f.x0 == std::vector<double>{0.5, 0.5});
    REQUIRE(f.t_end == 3.0);
}

TEST_CASE("parameters are declared constants", "[sysfile][params]") {
    ParsedSystemFile f = parse_system_file(
        "vars = x, y\n"
        "param a = sqrt(2) + 1\n"
        "param b = a^2\n"
        "phi = x^2, y^2\n"
        "G = a*u, b*v\n");
    REQUIRE(f.spec.params.at("a") == Approx(std::sqrt(2.0) + 1.0));
    REQUIRE(f.spec.params.at("b") == Approx((std::sqrt(2.0) + 1.0) * (std::sqrt(2.0) + 1.0)));
    std::map<std::string, double> syms;
    const_symbols(f.spec.g[0], syms);
    REQUIRE(syms.count("a") == 1);
}

TEST_CASE("diagnostics carry line numbers", "[sysfile][errors]") {
    auto line_of = [](const std::string& text) {
        try {
            parse_system_file(text);
        } catch (const SysFileError& e) {
            return e.line;
        }
        return -1;
    };

    REQUIRE(line_of("vars = x, y\nphi = x*y\nG = u, 1 - u\n") == 2);      // wrong arity
    REQUIRE(line_of("vars = x, y\nphi = x*(, y\nG = u, u\n") == 2);       // bad expression
    REQUIRE(line_of("vars = x, y\nwhat = 1\nphi = x, y\nG = u, v\n") == 2);  // unknown key
    REQUIRE(line_of("vars = x, y\nphi = x, y\nphi = y, x\nG = u, v\n") == 3);  // duplicate
    REQUIRE(line_of("vars = x, y\nphi = x, y\nG = u, v\nexpect = Sure\n") == 4);
    REQUIRE(line_of("vars = x, y\nphi = x, y\nG = u, v\nx0 = 1\n") == 4);  // arity
    REQUIRE(line_of("vars = x, x\nphi = x, x\nG = u, v\n") == 1);          // duplicate var
    REQUIRE_THROWS_AS(parse_system_file("vars = x\nG = u\n"), SysFileError);  // missing phi
}

TEST_CASE("malformed documents throw diagnostics, never crash", "[sysfile][fuzz]") {
    const CatalogEntry* e = catalog_find("ex4_4");
    REQUIRE(e != nullptr);
    const std::string base = e->document;
    int parsed_ok = 0, rejected = 0;
    for (int trial = 0; trial < 500; ++trial) {
        SampleRng gen(424242, static_cast<std::uint64_t>(trial));
        std::string doc = base;
        std::uint64_t edits = 1 + gen.next() % 4;
        for (std::uint64_t k = 0; k < edits && !doc.empty(); ++k) {
            std::size_t pos = gen.next() % doc.size();
            char c = static_cast<char>(32 + gen.next() % 95);
            switch (gen.next() % 3) {
                case 0: doc[pos] = c; break;
                case 1: doc.insert(pos, 1, c); break;
                default: doc.erase(pos, 1); break;
            }
        }
        try {
            parse_system_file(doc);
            ++parsed_ok;
        } catch (const Error&) {
            ++rejected;  // the contract: adjflow errors only, nothing else
        }
    }
    REQUIRE(parsed_ok + rejected == 500);
    REQUIRE(rejected > 0);
}

TEST_CASE("serialization is a fixed point after one round", "[sysfile][roundtrip]") {
    ParsedSystemFile f = parse_system_file(
        "vars = x, y, z\n"
        "base = 1, 1, 0\n"
        "phi = (x + y)/2, y - x, x^2 + z^2\n"
        "G = u/2, -v/2, 1\n"
        "integrals = I1: u*v, I2: v^2*exp(w)\n"
        "expected_F = y*z, x*z, 1 - x*y\n"
        "expected_H = H1: (y^2 - x^2)/2, H2: (y - x)^2*exp(x^2 + z^2)\n"
        "expect = CompletelyIntegrableVerified\n"
        "x0 = 0.3, 0.5, 0.2\n"
        "T = 10\n");
    std::string once = serialize_system_file(f);
    ParsedSystemFile g = parse_system_file(once);
    REQUIRE(serialize_system_file(g) == once);

    // structural equality of all parsed expressions
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(structurally_equal(f.spec.phi[i], g.spec.phi[i]));
        REQUIRE(structurally_equal(f.spec.g[i], g.spec.g[i]));
        REQUIRE(structurally_equal(f.spec.expected_f[i], g.spec.expected_f[i]));
    }
    REQUIRE(g.spec.base_point == f.spec.base_point);
    REQUIRE(g.x0 == f.x0);
}
