#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace testutil;

static const std::vector<std::string> XY = {"x", "y"};
static const std::vector<std::string> XYZ = {"x", "y", "z"};

namespace {

SymMatrix eval_matrix(const SymMatrix& m, const std::vector<std::string>& vars,
                      const std::vector<double>& pt, std::vector<std::vector<double>>& out) {
    out.assign(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                eval_double(m.at(i, j), vars, pt);
    return m;
}

// plain Gauss-Jordan inverse, used only as a cross-check oracle
bool invert(std::vector<std::vector<double>> a, std::vector<std::vector<double>>& inv) {
    std::size_t n = a.size();
    inv.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-12) return false;
        std::swap(a[col], a[pivot]);
        std::swap(inv[col], inv[pivot]);
        double d = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("jacobian of the worked maps", "[symmat]") {
    SymMatrix j = jacobian({P("x*y", XY), P("x + y^2/2", XY)}, XY);
    REQUIRE(structurally_equal(j.at(0, 0), variable("y")));
    REQUIRE(structurally_equal(j.at(0, 1), variable("x")));
    REQUIRE(structurally_equal(j.at(1, 0), constant(1L)));
    REQUIRE(structurally_equal(j.at(1, 1), variable("y")));

    SymMatrix id = jacobian({P("x", XY), P("y", XY)}, XY);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            REQUIRE(structurally_equal(id.at(i, k), constant(i == k ? 1L : 0L)));

    SymMatrix r = jacobian({P("(x^2 + y^2)/2 + z", XYZ), P("y", XYZ), P("z", XYZ)}, XYZ);
    REQUIRE(structurally_equal(r.at(0, 0), variable("x")));
    REQUIRE(structurally_equal(r.at(0, 1), variable("y")));
    REQUIRE(structurally_equal(r.at(0, 2), constant(1L)));
    REQUIRE(structurally_equal(r.at(1, 1), constant(1L)));
    REQUIRE(structurally_equal(r.at(2, 2), constant(1L)));
    REQUIRE(structurally_equal(r.at(1, 0), constant(0L)));
}

TEST_CASE("determinants", "[symmat][det]") {
    // 2x2 oracle: ad - bc by hand
    SymMatrix m(2, 2);
    m.at(0, 0) = P("y", XY);
    m.at(0, 1) = P("x", XY);
    m.at(1, 0) = constant(1L);
    m.at(1, 1) = P("y", XY);
    REQUIRE(*to_poly_nf(determinant(m), XY) == *to_poly_nf(P("y^2 - x", XY), XY));

    // maps that do not preserve dimension have identically zero determinant
    SymMatrix d1 = jacobian({P("x", XY), P("-x^2 + 1", XY)}, XY);
    REQUIRE(to_poly_nf(determinant(d1), XY)->is_zero());

    SymMatrix d2 = jacobian({P("x*z - y^2", XYZ), P("y*z - y^2", XYZ), P("x*z - y*z", XYZ)}, XYZ);
    REQUIRE(to_poly_nf(determinant(d2), XYZ)->is_zero());

    REQUIRE_THROWS_AS(determinant(SymMatrix(2, 3)), Error);
}

TEST_CASE("adjugate basics", "[symmat][adjugate]") {
    std::vector<std::string> abcd = {"a", "b", "c", "d"};
    SymMatrix m(2, 2);
    m.at(0, 0) = P("a", abcd);
    m.at(0, 1) = P("b", abcd);
    m.at(1, 0) = P("c", abcd);
    m.at(1, 1) = P("d", abcd);
    SymMatrix adj = adjugate(m);
    REQUIRE(structurally_equal(adj.at(0, 0), variable("d")));
    REQUIRE(structurally_equal(adj.at(0, 1), neg(variable("b"))));
    REQUIRE(structurally_equal(adj.at(1, 0), neg(variable("c"))));
    REQUIRE(structurally_equal(adj.at(1, 1), variable("a")));

    for (int n = 1; n <= 4; ++n) {
        SymMatrix id = adjugate(SymMatrix::identity(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                REQUIRE(structurally_equal(id.at(i, j), constant(i == j ? 1L : 0L)));
    }
}

TEST_CASE("adjugate of the Rikitake Jacobian", "[symmat][adjugate]") {
    // frozen from a hand cofactor expansion
    SymMatrix dphi = jacobian({P("(x + y)/2", XYZ), P("y - x", XYZ), P("x^2 + z^2", XYZ)}, XYZ);
    SymMatrix adj = adjugate(dphi);
    const char* expected[3][3] = {{"2*z", "-z", "0"}, {"2*z", "z", "0"}, {"-2*x", "x", "1"}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            auto got = to_poly_nf(adj.at(i, j), XYZ);
            auto want = to_poly_nf(P(expected[i][j], XYZ), XYZ);
            REQUIRE(*got == *want);
        }

    // cross-check against det * inverse at random numeric points
    Expr det = determinant(dphi);
    for (int trial = 0; trial < 20; ++trial) {
        SampleRng gen(88, static_cast<std::uint64_t>(trial));
        std::vector<double> pt = {1.0 + 0.001 * static_cast<double>(gen.next() % 1000),
                                  0.001 * static_cast<double>(gen.next() % 1000),
                                  1.0 + 0.001 * static_cast<double>(gen.next() % 1000)};
        std::vector<std::vector<double>> num, inv;
        eval_matrix(dphi, XYZ, pt, num);
        if (!invert(num, inv)) continue;
        double d = eval_double(det, XYZ, pt);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                REQUIRE(eval_double(adj.at(i, j), XYZ, pt) ==
                        Approx(d * inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                            .margin(1e-8));
    }
}

TEST_CASE("matvec", "[symmat]") {
    std::vector<Expr> fg = {P("x + y", XY), P("x*y", XY)};
    auto out = matvec(SymMatrix::identity(2), fg);
    REQUIRE(structurally_equal(out[0], fg[0]));
    REQUIRE(structurally_equal(out[1], fg[1]));
    REQUIRE_THROWS_AS(matvec(SymMatrix::identity(3), fg), Error);

    // adj(D phi) * (G o phi) for the planar Kolmogorov entry
    SymMatrix adj = adjugate(jacobian({P("x*y", XY), P("x + y^2/2", XY)}, XY));
    std::vector<Expr> g_of_phi = {P("x*y", XY), P("1 - x*y", XY)};
    auto f = matvec(adj, g_of_phi);
    REQUIRE(*to_poly_nf(f[0], XY) == *to_poly_nf(P("x*(-1 + x*y + y^2)", XY), XY));
    REQUIRE(*to_poly_nf(f[1], XY) == *to_poly_nf(P("y*(1 - x - x*y)", XY), XY));

    // same product for the Rikitake entry
    SymMatrix radj = adjugate(jacobian({P("(x + y)/2", XYZ), P("y - x", XYZ), P("x^2 + z^2", XYZ)}, XYZ));
    std::vector<Expr> rg = {P("(x + y)/2/2", XYZ), P("-(y - x)/2", XYZ), constant(1L)};
    auto rf = matvec(radj, rg);
    REQUIRE(*to_poly_nf(rf[0], XYZ) == *to_poly_nf(P("y*z", XYZ), XYZ));
    REQUIRE(*to_poly_nf(rf[1], XYZ) == *to_poly_nf(P("x*z", XYZ), XYZ));
    REQUIRE(*to_poly_nf(rf[2], XYZ) == *to_poly_nf(P("1 - x*y", XYZ), XYZ));
}

TEST_CASE("adjugate identity on random polynomial matrices", "[symmat][property]") {
    std::vector<std::string> vars = {"x", "y"};
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 6; ++trial) {
            SampleRng gen(1000 + static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial));
            SymMatrix m = random_poly_matrix(gen, n, vars);
            SymMatrix adj = adjugate(m);
            Expr det = determinant(m);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    Expr acc = constant(0L);
                    for (int k = 0; k < n; ++k) acc = add(acc, mul(m.at(i, k), adj.at(k, j)));
                    Expr expect = i == j ? det : constant(0L);
                    REQUIRE(to_poly_nf(sub(acc, expect), vars)->is_zero());
                }
            }
        }
    }
}

TEST_CASE("adjugate of adjugate", "[symmat][property]") {
    // adj(adj(m)) = det(m)^(n-2) * m for n >= 2, checked numerically
    std::vector<std::string> vars = {"x", "y"};
    for (int n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 4; ++trial) {
            SampleRng gen(2000 + static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial));
            SymMatrix m = random_poly_matrix(gen, n, vars);
            SymMatrix adj2 = adjugate(adjugate(m));
            Expr det = determinant(m);
            std::vector<double> pt = {0.7, -0.4};
            double dv = eval_double(det, vars, pt);
            double scale = std::pow(dv, n - 2);
            if (!std::isfinite(scale)) continue;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double lhs = eval_double(adj2.at(i, j), vars, pt);
                    double rhs = scale * eval_double(m.at(i, j), vars, pt);
                    REQUIRE(lhs == Approx(rhs).margin(1e-6 * std::max(1.0, std::fabs(rhs))));
                }
        }
    }
}

TEST_CASE("determinant of the transpose", "[symmat][property]") {
    std::vector<std::string> vars = {"x", "y"};
    for (int n = 2; n <= 4; ++n) {
        SampleRng gen(3000, static_cast<std::uint64_t>(n));
        SymMatrix m = random_poly_matrix(gen, n, vars);
        REQUIRE(to_poly_nf(sub(determinant(m), determinant(transpose(m))), vars)->is_zero());
    }
}

TEST_CASE("Bareiss elimination agrees with cofactor expansion", "[symmat][det]") {
    // n = 5 goes through fraction-free elimination over PolyNF
    std::vector<std::string> vars = {"x", "y"};
    for (int trial = 0; trial < 5; ++trial) {
        SampleRng gen(5005, static_cast<std::uint64_t>(trial));
        SymMatrix m(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                m.at(i, j) = (i + j) % 3 == 0 ? constant(random_rat(gen))
                                              : mul(constant(random_rat(gen)),
                                                    power(variable(vars[gen.next() % 2]),
                                                          static_cast<long>(gen.next() % 2 + 1)));
        Expr via_bareiss = determinant(m);
        Expr via_cofactor = adjflow::detail::det_cofactor(m);
        REQUIRE(to_poly_nf(sub(via_bareiss, via_cofactor), vars)->is_zero());
    }

    // singular matrices report a zero determinant
    SymMatrix s(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) s.at(i, j) = constant(static_cast<long>(i + 1));
    REQUIRE(to_poly_nf(determinant(s), {})->is_zero());
}
