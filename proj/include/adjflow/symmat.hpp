#pragma once

// Matrices of expressions: Jacobians, determinants, adjugates and products.
//
// Determinants use cofactor expansion up to 4x4 (no spurious denominators)
// and fraction-free Bareiss elimination over PolyNF above that when all
// entries are polynomial; non-polynomial entries fall back to cofactor
// expansion. Entries are never simplified beyond local constant folding.

#include <optional>
#include <set>
#include <vector>

#include "adjflow/polynf.hpp"

namespace adjflow {

class SymMatrix {
public:
    SymMatrix(int rows, int cols)
        : rows_(rows), cols_(cols),
          entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), constant(0L)) {}

    static SymMatrix identity(int n) {
        SymMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = constant(1L);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const Expr& at(int i, int j) const {
        return entries_[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)];
    }
    Expr& at(int i, int j) {
        return entries_[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)];
    }

    SymMatrix minor_matrix(int drop_row, int drop_col) const {
        SymMatrix m(rows_ - 1, cols_ - 1);
        int r = 0;
        for (int i = 0; i < rows_; ++i) {
            if (i == drop_row) continue;
            int c = 0;
            for (int j = 0; j < cols_; ++j) {
                if (j == drop_col) continue;
                m.at(r, c) = at(i, j);
                ++c;
            }
            ++r;
        }
        return m;
    }

private:
    int rows_, cols_;
    std::vector<Expr> entries_;
};

inline SymMatrix transpose(const SymMatrix& m) {
    SymMatrix t(m.cols(), m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) t.at(j, i) = m.at(i, j);
    return t;
}

inline SymMatrix jacobian(const std::vector<Expr>& components,
                          const std::vector<std::string>& vars) {
    SymMatrix m(static_cast<int>(components.size()), static_cast<int>(vars.size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            m.at(i, j) = diff(components[static_cast<std::size_t>(i)],
                              vars[static_cast<std::size_t>(j)]);
    return m;
}

namespace detail {

inline Expr det_cofactor(const SymMatrix& m) {
    int n = m.rows();
    if (n == 1) return m.at(0, 0);
    if (n == 2)
        return sub(mul(m.at(0, 0), m.at(1, 1)), mul(m.at(0, 1), m.at(1, 0)));
    Expr acc = constant(0L);
    for (int j = 0; j < n; ++j) {
        Expr term = mul(m.at(0, j), det_cofactor(m.minor_matrix(0, j)));
        acc = (j % 2 == 0) ? add(acc, term) : sub(acc, term);
    }
    return acc;
}

inline std::vector<std::string> matrix_vars(const SymMatrix& m) {
    std::set<std::string> names;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) free_vars(m.at(i, j), names);
    return {names.begin(), names.end()};
}

// Fraction-free Bareiss elimination; exact for polynomial entries. Returns
// nullopt when some entry is not polynomial.
inline std::optional<Expr> det_bareiss(const SymMatrix& m) {
    int n = m.rows();
    auto vars = matrix_vars(m);
    std::vector<std::vector<PolyNF>> a;
    a.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<PolyNF> row;
        row.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            auto p = to_poly_nf(m.at(i, j), vars);
            if (!p) return std::nullopt;
            row.push_back(std::move(*p));
        }
        a.push_back(std::move(row));
    }
    const std::vector<std::string> universe = a[0][0].vars();
    PolyNF prev = PolyNF::from_constant(universe, Rat(1));
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)].is_zero()) {
            int pivot = -1;
            for (int i = k + 1; i < n; ++i)
                if (!a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].is_zero()) {
                    pivot = i;
                    break;
                }
            if (pivot < 0) return constant(0L);
            std::swap(a[static_cast<std::size_t>(k)], a[static_cast<std::size_t>(pivot)]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                auto& akk = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
                auto& aik = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
                auto& akj = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                PolyNF num = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * akk -
                             aik * akj;
                auto q = num.divide_exact(prev);
                if (!q) throw Error("bareiss: inexact division");
                a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(*q);
            }
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                PolyNF(universe);  // eliminated
        }
        prev = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    }
    PolyNF det = a[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(n - 1)];
    Expr out = det.to_expr();
    return sign < 0 ? neg(out) : out;
}

}  // namespace detail

inline Expr determinant(const SymMatrix& m) {
    if (m.rows() != m.cols()) throw Error("determinant: matrix is not square");
    if (m.rows() <= 4) return detail::det_cofactor(m);
    auto bareiss = detail::det_bareiss(m);
    if (bareiss) return *bareiss;
    return detail::det_cofactor(m);
}

// adj(m)(i,j) = (-1)^(i+j) * minor(j, i); the adjugate of a 1x1 matrix is [[1]].
inline SymMatrix adjugate(const SymMatrix& m) {
    if (m.rows() != m.cols()) throw Error("adjugate: matrix is not square");
    int n = m.rows();
    SymMatrix adj(n, n);
    if (n == 1) {
        adj.at(0, 0) = constant(1L);
        return adj;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Expr minor_det = determinant(m.minor_matrix(j, i));
            adj.at(i, j) = ((i + j) % 2 == 0) ? minor_det : neg(minor_det);
        }
    }
    return adj;
}

inline std::vector<Expr> matvec(const SymMatrix& m, const std::vector<Expr>& v) {
    if (m.cols() != static_cast<int>(v.size())) throw Error("matvec: dimension mismatch");
    std::vector<Expr> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i) {
        Expr acc = constant(0L);
        for (int j = 0; j < m.cols(); ++j)
            acc = add(acc, mul(m.at(i, j), v[static_cast<std::size_t>(j)]));
        out.push_back(acc);
    }
    return out;
}

}  // namespace adjflow
