#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "parcohom/normal_form.hpp"

namespace parcohom {

/// A sublattice of Z^ambient, stored by its canonical basis: the row HNF of
/// any generating set. Two sublattices are equal iff their bases are equal.
struct Sublattice {
    std::size_t ambient_dim = 0;
    IntMat basis;  // rank x ambient_dim, row HNF, no zero rows

    std::size_t rank() const { return basis.rows(); }
    bool operator==(const Sublattice&) const = default;
};

inline Sublattice make_lattice(std::size_t ambient, const IntMat& generators) {
    if (!generators.empty() && generators.cols() != ambient)
        throw std::invalid_argument("make_lattice: ambient mismatch");
    IntMat gens = generators.empty() ? IntMat(0, ambient) : generators;
    return {ambient, hnf_basis(gens)};
}

inline Sublattice zero_lattice(std::size_t ambient) {
    return {ambient, IntMat(0, ambient)};
}

inline Sublattice full_lattice(std::size_t ambient) {
    return {ambient, IntMat::identity(ambient)};
}

/// Solve c * B = x over Q for a basis matrix B with independent rows.
/// Returns nullopt when x is outside the rational span.
inline std::optional<std::vector<Rat>> solve_in_span(const IntMat& B,
                                                     const std::vector<Int>& x) {
    std::size_t n = B.rows(), m = B.cols();
    // gaussian elimination on B^T | x^T
    RatMat aug(m, n + 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = Rat(B(j, i));
        aug(i, n) = Rat(x[i]);
    }
    std::size_t pr = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < n && pr < m; ++col) {
        std::size_t piv = pr;
        while (piv < m && aug(piv, col) == 0) ++piv;
        if (piv == m) continue;
        aug.swap_rows(pr, piv);
        Rat d = aug(pr, col);
        for (std::size_t j = 0; j <= n; ++j) aug(pr, j) /= d;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == pr || aug(r, col) == 0) continue;
            Rat f = aug(r, col);
            for (std::size_t j = 0; j <= n; ++j) aug(r, j) -= f * aug(pr, j);
        }
        pivots.push_back(col);
        ++pr;
    }
    for (std::size_t r = pr; r < m; ++r)
        if (aug(r, n) != 0) return std::nullopt;
    std::vector<Rat> c(n, Rat(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) c[pivots[r]] = aug(r, n);
    return c;
}

/// Integer coordinates of x in the lattice basis, or nullopt if x is not a
/// lattice member.
inline std::optional<std::vector<Int>> coords_in(const Sublattice& L,
                                                 const std::vector<Int>& x) {
    if (L.rank() == 0) {
        for (const Int& v : x)
            if (v != 0) return std::nullopt;
        return std::vector<Int>{};
    }
    auto c = solve_in_span(L.basis, x);
    if (!c) return std::nullopt;
    std::vector<Int> out;
    out.reserve(c->size());
    for (const Rat& v : *c) {
        if (!is_integer(v)) return std::nullopt;
        out.push_back(numerator(v));
    }
    return out;
}

inline bool contains(const Sublattice& L, const std::vector<Int>& x) {
    return coords_in(L, x).has_value();
}

inline bool contains(const Sublattice& big, const Sublattice& small) {
    for (std::size_t i = 0; i < small.rank(); ++i)
        if (!contains(big, small.basis.row(i))) return false;
    return true;
}

/// Saturated lattice {x in Z^rows(M) : x * M = 0}, via the HNF transform:
/// the transform rows mapping to zero rows of the HNF form a basis.
inline Sublattice integer_kernel(const IntMat& m) {
    if (m.rows() == 0) return zero_lattice(0);
    HnfResult res = hnf(m);
    std::size_t z = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (res.h.row_is_zero(i)) ++z;
    IntMat gens(z, m.rows());
    std::size_t k = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (res.h.row_is_zero(i)) gens.set_row(k++, res.u.row(i));
    return make_lattice(m.rows(), gens);
}

/// Smallest sublattice containing L whose quotient of the ambient lattice is
/// torsion-free; same rational span as L.
inline Sublattice saturate(const Sublattice& L) {
    if (L.rank() == 0) return L;
    // Saturation = kernel of (x -> x * K) where rows of K span the integer
    // kernel of B^T, i.e. double kernel: sat(L) = ker(ker(B^T)^T... simpler:
    // sat(L) = { x : x lies in span_Q(L) } cap Z^n, computed as the integer
    // kernel of a matrix whose columns cut out span_Q(L).
    Sublattice ortho = integer_kernel(transpose(L.basis));
    if (ortho.rank() == 0) return full_lattice(L.ambient_dim);
    return integer_kernel(transpose(ortho.basis));
}

struct QuotientResult {
    Sublattice free_lift;       // rows project to a basis of the free part
    std::vector<Int> torsion;   // invariant factors > 1
};

/// Quotient big/small: a lift of a basis of the free part plus the torsion
/// invariant factors. Requires small to be contained in big over Z.
inline QuotientResult quotient(const Sublattice& big, const Sublattice& small) {
    if (big.ambient_dim != small.ambient_dim)
        throw std::invalid_argument("quotient: ambient mismatch");
    std::size_t h = big.rank();
    IntMat X(small.rank(), h);
    for (std::size_t i = 0; i < small.rank(); ++i) {
        auto c = coords_in(big, small.basis.row(i));
        if (!c) throw std::invalid_argument("quotient: small not contained in big");
        if (h > 0) X.set_row(i, *c);
    }
    if (h == 0) return {zero_lattice(big.ambient_dim), {}};
    SnfResult s = snf(X);
    std::size_t k = 0;
    std::vector<Int> torsion;
    for (std::size_t i = 0; i < std::min(s.s.rows(), s.s.cols()); ++i)
        if (s.s(i, i) != 0) {
            ++k;
            if (s.s(i, i) > 1) torsion.push_back(s.s(i, i));
        }
    IntMat vinv = unimodular_inverse(s.v);
    IntMat lifts(h - k, big.ambient_dim);
    for (std::size_t i = k; i < h; ++i) {
        std::vector<Int> amb = vinv.row(i) * big.basis;
        lifts.set_row(i - k, amb);
    }
    return {Sublattice{big.ambient_dim, std::move(lifts)}, std::move(torsion)};
}

/// Sum of two sublattices of the same ambient.
inline Sublattice lattice_sum(const Sublattice& a, const Sublattice& b) {
    if (a.ambient_dim != b.ambient_dim)
        throw std::invalid_argument("lattice_sum: ambient mismatch");
    IntMat gens(a.rank() + b.rank(), a.ambient_dim);
    for (std::size_t i = 0; i < a.rank(); ++i) gens.set_row(i, a.basis.row(i));
    for (std::size_t i = 0; i < b.rank(); ++i) gens.set_row(a.rank() + i, b.basis.row(i));
    return make_lattice(a.ambient_dim, gens);
}

}  // namespace parcohom
