#pragma once

#include <utility>
#include <vector>

#include "parcohom/matrix.hpp"

namespace parcohom {

struct HnfResult {
    IntMat h;  // row Hermite normal form
    IntMat u;  // unimodular, u * input = h
};

/// Row Hermite normal form: pivots positive, entries above each pivot
/// reduced into [0, pivot).
inline HnfResult hnf(const IntMat& m) {
    IntMat a = m;
    std::size_t n = a.rows(), cols = a.cols();
    IntMat u = IntMat::identity(n);
    std::size_t pr = 0;
    for (std::size_t col = 0; col < cols && pr < n; ++col) {
        std::size_t piv = pr;
        while (piv < n && a(piv, col) == 0) ++piv;
        if (piv == n) continue;
        a.swap_rows(pr, piv);
        u.swap_rows(pr, piv);
        for (std::size_t r = pr + 1; r < n; ++r) {
            while (a(r, col) != 0) {
                Int q = a(pr, col) / a(r, col);  // Euclidean-style, truncated is fine
                for (std::size_t j = 0; j < cols; ++j) a(pr, j) -= q * a(r, j);
                for (std::size_t j = 0; j < n; ++j) u(pr, j) -= q * u(r, j);
                a.swap_rows(pr, r);
                u.swap_rows(pr, r);
            }
        }
        if (a(pr, col) < 0) {
            for (std::size_t j = 0; j < cols; ++j) a(pr, j) = -a(pr, j);
            for (std::size_t j = 0; j < n; ++j) u(pr, j) = -u(pr, j);
        }
        for (std::size_t r = 0; r < pr; ++r) {
            Int q = fdiv(a(r, col), a(pr, col));
            if (q != 0) {
                for (std::size_t j = 0; j < cols; ++j) a(r, j) -= q * a(pr, j);
                for (std::size_t j = 0; j < n; ++j) u(r, j) -= q * u(pr, j);
            }
        }
        ++pr;
    }
    return {std::move(a), std::move(u)};
}

/// Nonzero rows of the row HNF: the canonical basis of the row lattice.
inline IntMat hnf_basis(const IntMat& m) {
    if (m.empty()) return IntMat(0, m.cols());
    IntMat h = hnf(m).h;
    std::size_t nz = 0;
    for (std::size_t i = 0; i < h.rows(); ++i)
        if (!h.row_is_zero(i)) ++nz;
    IntMat out(nz, h.cols());
    std::size_t k = 0;
    for (std::size_t i = 0; i < h.rows(); ++i)
        if (!h.row_is_zero(i)) out.set_row(k++, h.row(i));
    return out;
}

struct SnfResult {
    IntMat s;  // diagonal, d1 | d2 | ..., entries nonnegative
    IntMat u;  // unimodular row transform
    IntMat v;  // unimodular column transform, u * input * v = s
};

inline SnfResult snf(const IntMat& m) {
    IntMat a = m;
    std::size_t n = a.rows(), cols = a.cols();
    IntMat u = IntMat::identity(n);
    IntMat v = IntMat::identity(cols);

    auto add_row = [&](std::size_t dst, std::size_t src, const Int& q) {
        for (std::size_t j = 0; j < cols; ++j) a(dst, j) -= q * a(src, j);
        for (std::size_t j = 0; j < n; ++j) u(dst, j) -= q * u(src, j);
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const Int& q) {
        for (std::size_t i = 0; i < n; ++i) a(i, dst) -= q * a(i, src);
        for (std::size_t i = 0; i < cols; ++i) v(i, dst) -= q * v(i, src);
    };

    std::size_t t = 0;
    while (t < n && t < cols) {
        // smallest nonzero entry in the remaining block as pivot
        std::size_t pi = t, pj = t;
        bool found = false;
        for (std::size_t i = t; i < n; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a(i, j) != 0 &&
                    (!found || abs_int(a(i, j)) < abs_int(a(pi, pj)))) {
                    pi = i;
                    pj = j;
                    found = true;
                }
        if (!found) break;
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        bool again = true;
        while (again) {
            again = false;
            for (std::size_t i = t + 1; i < n; ++i)
                if (a(i, t) != 0) {
                    add_row(i, t, a(i, t) / a(t, t));
                    if (a(i, t) != 0) {
                        a.swap_rows(t, i);
                        u.swap_rows(t, i);
                        again = true;
                    }
                }
            for (std::size_t j = t + 1; j < cols; ++j)
                if (a(t, j) != 0) {
                    add_col(j, t, a(t, j) / a(t, t));
                    if (a(t, j) != 0) {
                        a.swap_cols(t, j);
                        v.swap_cols(t, j);
                        again = true;
                    }
                }
        }
        // divisibility: fold in any offending row and redo the pivot
        std::size_t bad = n;
        for (std::size_t i = t + 1; i < n && bad == n; ++i)
            for (std::size_t j = t + 1; j < cols; ++j)
                if (a(i, j) % a(t, t) != 0) {
                    bad = i;
                    break;
                }
        if (bad != n) {
            add_row(t, bad, Int(-1));
            continue;
        }
        if (a(t, t) < 0) {
            for (std::size_t j = 0; j < cols; ++j) a(t, j) = -a(t, j);
            for (std::size_t j = 0; j < n; ++j) u(t, j) = -u(t, j);
        }
        ++t;
    }
    return {std::move(a), std::move(u), std::move(v)};
}

/// Nonzero diagonal entries of the SNF.
inline std::vector<Int> invariant_factors(const IntMat& m) {
    if (m.empty()) return {};
    IntMat s = snf(m).s;
    std::vector<Int> out;
    std::size_t k = std::min(s.rows(), s.cols());
    for (std::size_t i = 0; i < k; ++i)
        if (s(i, i) != 0) out.push_back(s(i, i));
    return out;
}

}  // namespace parcohom
