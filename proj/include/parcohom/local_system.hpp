#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parcohom/forms.hpp"

namespace parcohom {

/// Monodromy tuple g = (g_1, ..., g_r) of a local system on the r-punctured
/// sphere: integer matrices acting on row vectors on the right, with
/// g_1 g_2 ... g_r = 1 in path order. Points are opaque labels used only for
/// reporting; by convention the point at infinity, when present, is last.
struct MonodromyTuple {
    std::size_t rank_p = 0;
    std::vector<std::string> points;
    std::vector<IntMat> mats;
    std::optional<GramForm> pairing;

    std::size_t r() const { return mats.size(); }
    bool has_infinity_slot() const {
        return !points.empty() && points.back() == "inf";
    }
};

inline MonodromyTuple make_monodromy_tuple(std::vector<IntMat> mats,
                                 std::vector<std::string> points = {},
                                 std::optional<GramForm> pairing = std::nullopt) {
    MonodromyTuple t;
    t.rank_p = mats.empty() ? 0 : mats.front().rows();
    if (points.empty())
        for (std::size_t i = 0; i < mats.size(); ++i)
            points.push_back(std::to_string(i + 1));
    t.points = std::move(points);
    t.mats = std::move(mats);
    t.pairing = std::move(pairing);
    return t;
}

inline IntMat tuple_product(const MonodromyTuple& t) {
    IntMat p = IntMat::identity(t.rank_p);
    for (const IntMat& g : t.mats) p = p * g;
    return p;
}

/// Validation report; empty means the tuple is a valid monodromy tuple.
inline std::vector<std::string> validate(const MonodromyTuple& t) {
    std::vector<std::string> bad;
    if (t.r() < 3) bad.push_back("fewer than 3 punctures");
    if (t.points.size() != t.r()) bad.push_back("label count mismatch");
    for (std::size_t i = 0; i < t.r(); ++i) {
        const IntMat& g = t.mats[i];
        if (g.rows() != t.rank_p || g.cols() != t.rank_p) {
            bad.push_back("slot " + std::to_string(i + 1) + ": wrong shape");
            continue;
        }
        Int d = det(g);
        if (d != 1 && d != -1)
            bad.push_back("slot " + std::to_string(i + 1) + ": det not +-1");
    }
    if (bad.empty() && !(tuple_product(t) == IntMat::identity(t.rank_p)))
        bad.push_back("ordered product is not the identity");
    if (t.pairing) {
        if (t.pairing->dim() != t.rank_p)
            bad.push_back("pairing dimension mismatch");
        else
            for (std::size_t i = 0; i < t.r(); ++i)
                if (!(t.mats[i] * t.pairing->mat * transpose(t.mats[i]) == t.pairing->mat))
                    bad.push_back("slot " + std::to_string(i + 1) +
                                  ": pairing not preserved");
    }
    return bad;
}

inline std::size_t fixed_space_dim(const IntMat& g) {
    IntMat k = g - IntMat::identity(g.rows());
    return g.rows() - rank_q(k);
}

/// Common fixed space of all slots (the stabilizer V^{pi_1}), saturated.
inline Sublattice tuple_stabilizer(const MonodromyTuple& t) {
    std::size_t p = t.rank_p;
    IntMat stacked(p, p * t.r());
    for (std::size_t s = 0; s < t.r(); ++s) {
        IntMat k = t.mats[s] - IntMat::identity(p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) stacked(i, s * p + j) = k(i, j);
    }
    return integer_kernel(stacked);
}

struct ExpectedRank {
    std::size_t value = 0;
    bool stabilizer_trivial = false;  // formula is only exact in this case
};

/// (r-2) p - sum_i dim ker(g_i - 1), kernels over Q.
inline ExpectedRank expected_rank(const MonodromyTuple& t) {
    std::size_t s = 0;
    for (const IntMat& g : t.mats) s += fixed_space_dim(g);
    std::size_t base = (t.r() - 2) * t.rank_p;
    ExpectedRank out;
    out.value = base >= s ? base - s : 0;
    out.stabilizer_trivial = tuple_stabilizer(t).rank() == 0;
    return out;
}

inline std::vector<IntMat> suffix_products(const MonodromyTuple& t) {
    std::size_t r = t.r();
    std::vector<IntMat> s(r);
    s[r - 1] = IntMat::identity(t.rank_p);
    for (std::size_t i = r - 1; i-- > 0;) s[i] = t.mats[i + 1] * s[i + 1];
    return s;
}

/// The parabolic cocycle lattice H_g in Z^{rp}: tuples (v_1,...,v_r) with
/// each v_i in the integral row lattice of (g_i - 1) and
/// v_1 g_2...g_r + v_2 g_3...g_r + ... + v_r = 0. Membership is in the
/// integral row lattice of (g_i - 1), not its saturation.
inline Sublattice cocycle_lattice(const MonodromyTuple& t) {
    std::size_t r = t.r(), p = t.rank_p, n = r * p;
    // u -> (u_1 (g_1-1), ..., u_r (g_r-1)), block diagonal
    IntMat d(n, n);
    for (std::size_t s = 0; s < r; ++s) {
        IntMat k = t.mats[s] - IntMat::identity(p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) d(s * p + i, s * p + j) = k(i, j);
    }
    // v -> sum_i v_i * (g_{i+1} ... g_r)
    std::vector<IntMat> suf = suffix_products(t);
    IntMat rel(n, p);
    for (std::size_t s = 0; s < r; ++s)
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) rel(s * p + i, j) = suf[s](i, j);
    Sublattice pre = integer_kernel(d * rel);
    if (pre.rank() == 0) return zero_lattice(n);
    return make_lattice(n, pre.basis * d);
}

/// The coboundary lattice E_g: rows (v(g_1-1), ..., v(g_r-1)) for v in Z^p.
inline Sublattice coboundary_lattice(const MonodromyTuple& t) {
    std::size_t r = t.r(), p = t.rank_p;
    IntMat gen(p, r * p);
    for (std::size_t s = 0; s < r; ++s) {
        IntMat k = t.mats[s] - IntMat::identity(p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) gen(i, s * p + j) = k(i, j);
    }
    return make_lattice(r * p, gen);
}

/// H_g, E_g and the braid companion quotient W_g = H_g / E_g: lifts of a
/// basis of the free part plus torsion invariant factors, together with the
/// coordinate transform needed to project cocycles onto the free quotient.
struct ParabolicModule {
    MonodromyTuple tuple;
    Sublattice H;
    Sublattice E;
    Sublattice W_basis;         // lifts of a free-quotient basis, rows in Z^{rp}
    std::vector<Int> torsion;   // invariant factors > 1 of H/E
    IntMat quotient_transform;  // V from snf(E-in-H-coords); free coords = (c*V)[k:]
    std::size_t quotient_k = 0;

    std::size_t rank() const { return W_basis.rank(); }
};

inline ParabolicModule parabolic_cohomology(const MonodromyTuple& t) {
    ParabolicModule m;
    m.tuple = t;
    m.H = cocycle_lattice(t);
    m.E = coboundary_lattice(t);
    std::size_t h = m.H.rank();
    if (h == 0) {
        m.W_basis = zero_lattice(t.r() * t.rank_p);
        ExpectedRank er = expected_rank(t);
        if (er.stabilizer_trivial && er.value != 0)
            throw std::logic_error("parabolic_cohomology: rank disagrees with "
                                   "the local-monodromy formula");
        return m;
    }
    IntMat X(m.E.rank(), h);
    for (std::size_t i = 0; i < m.E.rank(); ++i) {
        auto c = coords_in(m.H, m.E.basis.row(i));
        if (!c) throw std::logic_error("coboundaries not contained in cocycles");
        X.set_row(i, *c);
    }
    SnfResult s = snf(X);
    std::size_t k = 0;
    for (std::size_t i = 0; i < std::min(s.s.rows(), s.s.cols()); ++i)
        if (s.s(i, i) != 0) {
            ++k;
            if (s.s(i, i) > 1) m.torsion.push_back(s.s(i, i));
        }
    IntMat vinv = unimodular_inverse(s.v);
    IntMat lifts(h - k, t.r() * t.rank_p);
    for (std::size_t i = k; i < h; ++i)
        lifts.set_row(i - k, vinv.row(i) * m.H.basis);
    m.W_basis = Sublattice{t.r() * t.rank_p, std::move(lifts)};
    m.quotient_transform = s.v;
    m.quotient_k = k;
    ExpectedRank er = expected_rank(t);
    if (er.stabilizer_trivial && er.value != m.rank())
        throw std::logic_error("parabolic_cohomology: rank disagrees with the "
                               "local-monodromy formula");
    return m;
}

/// Coordinates of a cocycle x in the free-quotient basis of W.
inline std::vector<Int> free_quotient_coords(const ParabolicModule& m,
                                             const std::vector<Int>& x) {
    auto c = coords_in(m.H, x);
    if (!c) throw std::domain_error("free_quotient_coords: not a cocycle in H");
    std::size_t h = m.H.rank();
    std::vector<Int> cv(h, Int(0));
    for (std::size_t j = 0; j < h; ++j)
        for (std::size_t i = 0; i < h; ++i) cv[j] += (*c)[i] * m.quotient_transform(i, j);
    return std::vector<Int>(cv.begin() + static_cast<long>(m.quotient_k), cv.end());
}

}  // namespace parcohom
