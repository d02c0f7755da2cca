#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "parcohom/local_system.hpp"

namespace parcohom {

/// A parabolic module together with the fiber pairing J; the induced cup
/// pairing on W has the **opposite** symmetry to J.
struct PairingContext {
    ParabolicModule module;
    GramForm J;
};

inline PairingContext make_pairing_context(ParabolicModule m, GramForm j) {
    if (j.dim() != m.tuple.rank_p)
        throw std::invalid_argument("pairing context: dimension mismatch");
    if (det(j.mat) == 0)
        throw std::invalid_argument("pairing context: degenerate fiber pairing");
    return {std::move(m), std::move(j)};
}

namespace detail {

/// One particular rational solution u of u K = rhs, or nullopt.
inline std::optional<std::vector<Rat>> solve_row_system(const IntMat& K,
                                                        const std::vector<Rat>& rhs) {
    std::size_t p = K.rows(), m = K.cols();
    RatMat aug(m, p + 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < p; ++j) aug(i, j) = Rat(K(j, i));
        aug(i, p) = rhs[i];
    }
    std::size_t pr = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < p && pr < m; ++col) {
        std::size_t piv = pr;
        while (piv < m && aug(piv, col) == 0) ++piv;
        if (piv == m) continue;
        aug.swap_rows(pr, piv);
        Rat dd = aug(pr, col);
        for (std::size_t j = 0; j <= p; ++j) aug(pr, j) /= dd;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == pr || aug(r, col) == 0) continue;
            Rat f = aug(r, col);
            for (std::size_t j = 0; j <= p; ++j) aug(r, j) -= f * aug(pr, j);
        }
        pivots.push_back(col);
        ++pr;
    }
    for (std::size_t r = pr; r < m; ++r)
        if (aug(r, p) != 0) return std::nullopt;
    std::vector<Rat> u(p, Rat(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) u[pivots[r]] = aug(r, p);
    return u;
}

/// Cup product with an injectable choice shift: perturb(i) may return an
/// element of ker(g_i - 1) to add to u_i; the value must not depend on it.
inline Rat cup_value(const MonodromyTuple& t, const GramForm& J,
                     const std::vector<Int>& d1, const std::vector<Int>& d2,
                     const std::function<std::vector<Rat>(std::size_t)>* perturb) {
    std::size_t r = t.r(), p = t.rank_p;
    if (d1.size() != r * p || d2.size() != r * p)
        throw std::invalid_argument("cup: cocycle length mismatch");
    auto slot = [&](const std::vector<Int>& d, std::size_t i) {
        std::vector<Rat> v(p);
        for (std::size_t j = 0; j < p; ++j) v[j] = Rat(d[i * p + j]);
        return v;
    };
    RatMat jq = to_rat(J.mat);
    auto pair = [&](const std::vector<Rat>& x, const std::vector<Rat>& y) {
        Rat s = 0;
        for (std::size_t i = 0; i < p; ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < p; ++j) s += x[i] * jq(i, j) * y[j];
        }
        return s;
    };
    // w_0 = 0, w_i = v_i + w_{i-1} g_i
    std::vector<std::vector<Rat>> w1(r + 1, std::vector<Rat>(p, Rat(0)));
    std::vector<std::vector<Rat>> w2(r + 1, std::vector<Rat>(p, Rat(0)));
    for (std::size_t i = 1; i <= r; ++i) {
        RatMat g = to_rat(t.mats[i - 1]);
        std::vector<Rat> a = slot(d1, i - 1), b = slot(d2, i - 1);
        for (std::size_t c = 0; c < p; ++c) {
            Rat s1 = a[c], s2 = b[c];
            for (std::size_t k = 0; k < p; ++k) {
                s1 += w1[i - 1][k] * g(k, c);
                s2 += w2[i - 1][k] * g(k, c);
            }
            w1[i][c] = s1;
            w2[i][c] = s2;
        }
    }
    Rat total = 0;
    for (std::size_t i = 1; i <= r; ++i) {
        IntMat K = t.mats[i - 1] - IntMat::identity(p);
        std::vector<Rat> rhs(p);
        for (std::size_t c = 0; c < p; ++c) rhs[c] = w2[i][c] - w2[i - 1][c];
        auto u = solve_row_system(K, rhs);
        if (!u)
            throw std::domain_error("cup: u_i system unsolvable (input not parabolic)");
        if (perturb) {
            std::vector<Rat> extra = (*perturb)(i - 1);
            for (std::size_t c = 0; c < p; ++c) (*u)[c] += extra[c];
        }
        std::vector<Rat> x(p), y(p);
        for (std::size_t c = 0; c < p; ++c) {
            x[c] = w1[i][c] - w1[i - 1][c];
            y[c] = (*u)[c] - w2[i - 1][c];
        }
        total += pair(x, y);
    }
    return total;
}

}  // namespace detail

/// The Dettweiler-Wewers cup product of two parabolic cocycles.
inline Rat cup(const PairingContext& ctx, const std::vector<Int>& d1,
               const std::vector<Int>& d2) {
    return detail::cup_value(ctx.module.tuple, ctx.J, d1, d2, nullptr);
}

inline Symmetry opposite(Symmetry s) {
    return s == Symmetry::symmetric ? Symmetry::antisymmetric : Symmetry::symmetric;
}

struct CupIntegralityError : std::runtime_error {
    std::size_t i, j;
    CupIntegralityError(std::size_t i_, std::size_t j_, const std::string& msg)
        : std::runtime_error(msg), i(i_), j(j_) {}
};

/// Pairwise cup values on the W basis lifts; integral for integral input,
/// symmetry opposite to J.
inline GramForm gram_on_W(const PairingContext& ctx) {
    std::size_t n = ctx.module.rank();
    IntMat q(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rat v = cup(ctx, ctx.module.W_basis.basis.row(i),
                        ctx.module.W_basis.basis.row(j));
            if (!is_integer(v))
                throw CupIntegralityError(i, j, "cup value not integral at pair (" +
                                                    std::to_string(i) + "," +
                                                    std::to_string(j) + ")");
            q(i, j) = numerator(v);
        }
    GramForm out{std::move(q), opposite(ctx.J.sym)};
    if (!symmetry_consistent(out))
        throw std::logic_error("gram_on_W: parity rule violated");
    return out;
}

}  // namespace parcohom
