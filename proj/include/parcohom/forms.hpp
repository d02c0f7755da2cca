#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "parcohom/lattice.hpp"

namespace parcohom {

enum class Symmetry { symmetric, antisymmetric };

/// An integer bilinear form together with its (anti)symmetry flag.
struct GramForm {
    IntMat mat;
    Symmetry sym = Symmetry::symmetric;

    std::size_t dim() const { return mat.rows(); }
    bool operator==(const GramForm&) const = default;
};

inline bool symmetry_consistent(const GramForm& q) {
    IntMat t = transpose(q.mat);
    return q.sym == Symmetry::symmetric ? t == q.mat : t == -q.mat;
}

inline GramForm make_gram(IntMat m, Symmetry sym) {
    GramForm q{std::move(m), sym};
    if (!q.mat.is_square()) throw std::invalid_argument("make_gram: not square");
    if (!symmetry_consistent(q)) throw std::invalid_argument("make_gram: symmetry flag wrong");
    return q;
}

/// Invariant factors > 1 of the Gram matrix: the discriminant group
/// d1 | d2 | ... as Z/d1 + Z/d2 + ...
struct DiscriminantGroup {
    std::vector<Int> factors;
    bool operator==(const DiscriminantGroup&) const = default;
};

inline DiscriminantGroup discriminant_group(const IntMat& gram) {
    DiscriminantGroup g;
    for (const Int& d : invariant_factors(gram))
        if (d > 1) g.factors.push_back(d);
    return g;
}

/// Exact signature (p, n) of a nondegenerate symmetric form by symmetric
/// Gaussian elimination over Q (congruence ops only). Throws on degenerate
/// or antisymmetric input.
inline std::pair<std::size_t, std::size_t> signature(const GramForm& q) {
    if (q.sym != Symmetry::symmetric)
        throw std::domain_error("signature: form is antisymmetric");
    std::size_t n = q.dim();
    RatMat a = to_rat(q.mat);
    std::size_t pos = 0, neg = 0;
    for (std::size_t k = 0; k < n; ++k) {
        // ensure a nonzero diagonal pivot at (k,k)
        if (a(k, k) == 0) {
            std::size_t d = k;
            while (d < n && a(d, d) == 0) ++d;
            if (d < n) {
                a.swap_rows(k, d);
                a.swap_cols(k, d);
            } else {
                std::size_t i = n, j = n;
                for (std::size_t r = k; r < n && i == n; ++r)
                    for (std::size_t c = r + 1; c < n; ++c)
                        if (a(r, c) != 0) {
                            i = r;
                            j = c;
                            break;
                        }
                if (i == n) throw std::domain_error("signature: degenerate form");
                // congruence row/col add turns the off-diagonal pair into a diagonal entry
                for (std::size_t c = 0; c < n; ++c) a(i, c) += a(j, c);
                for (std::size_t r = 0; r < n; ++r) a(r, i) += a(r, j);
                a.swap_rows(k, i);
                a.swap_cols(k, i);
            }
        }
        if (a(k, k) > 0)
            ++pos;
        else
            ++neg;
        for (std::size_t r = k + 1; r < n; ++r) {
            if (a(r, k) == 0) continue;
            Rat f = a(r, k) / a(k, k);
            for (std::size_t c = k; c < n; ++c) a(r, c) -= f * a(k, c);
            for (std::size_t c = k; c < n; ++c) a(c, r) = a(r, c);
        }
    }
    return {pos, neg};
}

struct FormInvariants {
    Int det;
    DiscriminantGroup disc;
    std::optional<std::pair<std::size_t, std::size_t>> sig;  // symmetric, nondegenerate only
};

inline FormInvariants form_invariants(const GramForm& q) {
    FormInvariants inv;
    inv.det = det(q.mat);
    inv.disc = discriminant_group(q.mat);
    if (q.sym == Symmetry::symmetric && inv.det != 0) inv.sig = signature(q);
    return inv;
}

/// Gram matrix of the form restricted to the rows of L's basis.
inline GramForm gram_restrict(const Sublattice& L, const GramForm& j) {
    if (L.ambient_dim != j.dim())
        throw std::invalid_argument("gram_restrict: ambient mismatch");
    IntMat b = L.basis;
    return GramForm{b * j.mat * transpose(b), j.sym};
}

/// Saturated {x in ambient : x J y^T = 0 for all y in L}.
inline Sublattice orthogonal_complement(const Sublattice& L, const GramForm& j,
                                        const Sublattice& ambient) {
    if (L.ambient_dim != j.dim() || ambient.ambient_dim != j.dim())
        throw std::invalid_argument("orthogonal_complement: ambient mismatch");
    if (L.rank() == 0) return ambient;
    // condition on coordinates c w.r.t. ambient basis A: c * (A J B^T) = 0
    IntMat cond = ambient.basis * j.mat * transpose(L.basis);
    Sublattice coeff = integer_kernel(cond);
    if (coeff.rank() == 0) return zero_lattice(ambient.ambient_dim);
    IntMat gens = coeff.basis * ambient.basis;
    return make_lattice(ambient.ambient_dim, gens);
}

}  // namespace parcohom
