#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "parcohom/forms.hpp"
#include "parcohom/local_system.hpp"

namespace parcohom {

struct MatrixOrder {
    std::optional<unsigned> finite;      // order when <= cap
    bool quasi_unipotent = false;        // some power is unipotent (order infinite)
    unsigned quasi_unipotent_power = 0;  // the witnessing power

    std::string str() const {
        if (finite) return std::to_string(*finite);
        return quasi_unipotent ? "inf" : "inf?";
    }
};

/// Order of an integer matrix by bounded power iteration; beyond the cap,
/// reports infinity with a quasi-unipotency certificate when (M^k - 1) is
/// nilpotent for some k <= cap.
inline MatrixOrder matrix_order(const IntMat& m, unsigned cap = 24) {
    MatrixOrder out;
    std::size_t d = m.rows();
    IntMat id = IntMat::identity(d);
    IntMat p = m;
    for (unsigned k = 1; k <= cap; ++k) {
        if (p == id) {
            out.finite = k;
            return out;
        }
        IntMat n = p - id;
        IntMat nk = n;
        bool nilpotent = false;
        for (std::size_t e = 1; e <= d; ++e) {
            if (rank_q(nk) == 0) {
                nilpotent = true;
                break;
            }
            nk = nk * n;
        }
        if (nilpotent && !out.quasi_unipotent) {
            out.quasi_unipotent = true;
            out.quasi_unipotent_power = k;
        }
        p = p * m;
    }
    return out;
}

struct SplitResult {
    Sublattice fixed;            // intersection of the ker(eta - 1), saturated
    Sublattice T;                // W cap (fixed tensor Q)^perp, saturated
    GramForm T_gram;
    std::vector<IntMat> T_monodromy;
    bool hypothesis_ok = true;   // fixed cap T = 0
};

/// Split W into the monodromy-invariant part and its Q-orthogonal
/// complement, the transcendental part.
inline SplitResult split(const GramForm& Q, const std::vector<IntMat>& monodromies) {
    std::size_t d = Q.dim();
    if (det(Q.mat) == 0) throw std::invalid_argument("split: Q degenerate");
    IntMat stacked(d, d * monodromies.size());
    for (std::size_t s = 0; s < monodromies.size(); ++s) {
        IntMat k = monodromies[s] - IntMat::identity(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) stacked(i, s * d + j) = k(i, j);
    }
    SplitResult res;
    res.fixed = monodromies.empty() ? full_lattice(d) : integer_kernel(stacked);
    res.T = orthogonal_complement(res.fixed, Q, full_lattice(d));
    res.T_gram = gram_restrict(res.T, Q);
    for (const IntMat& m : monodromies) {
        // T is saturated and monodromy-stable, so the restriction is integral
        IntMat img = res.T.basis * m;
        IntMat r(res.T.rank(), res.T.rank());
        for (std::size_t i = 0; i < res.T.rank(); ++i) {
            auto c = coords_in(res.T, img.row(i));
            if (!c) throw std::logic_error("split: T is not monodromy-stable");
            r.set_row(i, *c);
        }
        if (!(r * res.T_gram.mat * transpose(r) == res.T_gram.mat))
            throw std::logic_error("split: restricted monodromy breaks T_gram");
        res.T_monodromy.push_back(std::move(r));
    }
    // fixed cap T = 0 iff the stacked bases stay independent over Q
    IntMat stack(res.fixed.rank() + res.T.rank(), d);
    for (std::size_t i = 0; i < res.fixed.rank(); ++i)
        stack.set_row(i, res.fixed.basis.row(i));
    for (std::size_t i = 0; i < res.T.rank(); ++i)
        stack.set_row(res.fixed.rank() + i, res.T.basis.row(i));
    if (rank_q(stack) != res.fixed.rank() + res.T.rank()) res.hypothesis_ok = false;
    if (res.fixed.rank() + res.T.rank() != d) res.hypothesis_ok = false;
    return res;
}

struct InvariantReport {
    std::size_t rank = 0;
    Int det_value = 0;
    DiscriminantGroup disc;
    std::optional<std::pair<std::size_t, std::size_t>> sig;
    std::vector<MatrixOrder> orders;
    std::vector<Int> traces;
    std::vector<std::vector<Int>> charpolys;
};

inline InvariantReport invariant_report(const GramForm& T_gram,
                                        const std::vector<IntMat>& T_monodromy) {
    InvariantReport rep;
    rep.rank = T_gram.dim();
    if (rep.rank == 0) return rep;
    FormInvariants inv = form_invariants(T_gram);
    rep.det_value = inv.det;
    rep.disc = inv.disc;
    rep.sig = inv.sig;
    for (const IntMat& m : T_monodromy) {
        rep.orders.push_back(matrix_order(m));
        rep.traces.push_back(trace(m));
        rep.charpolys.push_back(charpoly(m));
    }
    return rep;
}

struct EquivalenceVerdict {
    bool consistent = true;
    std::string detail;  // first differing invariant when distinct
};

/// Necessary-condition comparison of two nondegenerate symmetric forms:
/// equal rank, determinant, discriminant group and signature. Explicitly
/// not an isometry test.
inline EquivalenceVerdict forms_plausibly_equivalent(const GramForm& a,
                                                     const GramForm& b) {
    EquivalenceVerdict v;
    auto fail = [&](const std::string& what) {
        v.consistent = false;
        v.detail = what;
        return v;
    };
    if (a.sym != Symmetry::symmetric || b.sym != Symmetry::symmetric)
        return fail("not symmetric");
    if (a.dim() != b.dim()) return fail("rank");
    FormInvariants ia = form_invariants(a), ib = form_invariants(b);
    if (ia.det == 0 || ib.det == 0) return fail("degenerate");
    if (ia.det != ib.det) return fail("determinant");
    if (!(ia.disc == ib.disc)) return fail("discriminant group");
    if (ia.sig != ib.sig) return fail("signature");
    v.detail = "rank, det, disc, signature agree";
    return v;
}

}  // namespace parcohom
