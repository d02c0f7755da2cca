#pragma once

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "parcohom/local_system.hpp"

namespace parcohom {

/// A word in the Artin generators b_1 ... b_{r-1}, stored one letter at a
/// time as (index, +-1). Letters act left to right.
struct BraidWord {
    std::vector<std::pair<int, int>> letters;

    BraidWord inverse() const {
        BraidWord w;
        for (auto it = letters.rbegin(); it != letters.rend(); ++it)
            w.letters.emplace_back(it->first, -it->second);
        return w;
    }
    BraidWord operator*(const BraidWord& o) const {
        BraidWord w = *this;
        w.letters.insert(w.letters.end(), o.letters.begin(), o.letters.end());
        return w;
    }
};

/// Grammar: "b1^2 b2^-1" or "b1^2 * b2^-1"; whitespace-insensitive, no
/// implicit inverses. Throws std::invalid_argument with the offending offset.
inline BraidWord parse_braid(const std::string& s) {
    BraidWord w;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == '*'))
            ++i;
    };
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("braid parse error at offset " +
                                    std::to_string(i) + ": " + what);
    };
    skip();
    while (i < s.size()) {
        if (s[i] != 'b' && s[i] != 'B') fail("expected 'b'");
        ++i;
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            fail("expected generator index");
        int idx = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            idx = idx * 10 + (s[i++] - '0');
        if (idx < 1) fail("generator index must be >= 1");
        long exp = 1;
        if (i < s.size() && s[i] == '^') {
            ++i;
            bool negative = false;
            if (i < s.size() && (s[i] == '-' || s[i] == '+')) negative = (s[i++] == '-');
            if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
                fail("expected exponent");
            exp = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                exp = exp * 10 + (s[i++] - '0');
            if (exp == 0) fail("zero exponent");
            if (negative) exp = -exp;
        }
        int sign = exp > 0 ? 1 : -1;
        for (long k = 0; k < (exp > 0 ? exp : -exp); ++k)
            w.letters.emplace_back(idx, sign);
        skip();
    }
    return w;
}

inline std::string to_string(const BraidWord& w) {
    std::string out;
    std::size_t i = 0;
    while (i < w.letters.size()) {
        std::size_t j = i;
        while (j < w.letters.size() && w.letters[j] == w.letters[i]) ++j;
        long exp = static_cast<long>(j - i) * w.letters[i].second;
        if (!out.empty()) out += ' ';
        out += 'b' + std::to_string(w.letters[i].first);
        if (exp != 1) out += '^' + std::to_string(exp);
        i = j;
    }
    return out;
}

inline void check_indices(const MonodromyTuple& t, const BraidWord& w) {
    for (auto [idx, sign] : w.letters)
        if (idx < 1 || static_cast<std::size_t>(idx) >= t.r())
            throw std::invalid_argument("braid index " + std::to_string(idx) +
                                        " out of range for r=" + std::to_string(t.r()));
}

inline MonodromyTuple braid_apply_letter(const MonodromyTuple& t, int idx, int sign) {
    MonodromyTuple out = t;
    std::size_t i = static_cast<std::size_t>(idx) - 1;
    const IntMat& a = t.mats[i];
    const IntMat& b = t.mats[i + 1];
    if (sign > 0) {
        // g^{b_i} = (..., g_{i+1}, g_{i+1}^{-1} g_i g_{i+1}, ...)
        out.mats[i] = b;
        out.mats[i + 1] = unimodular_inverse(b) * a * b;
    } else {
        out.mats[i] = a * b * unimodular_inverse(a);
        out.mats[i + 1] = a;
    }
    return out;
}

inline MonodromyTuple braid_apply(const MonodromyTuple& t, const BraidWord& w) {
    check_indices(t, w);
    MonodromyTuple cur = t;
    for (auto [idx, sign] : w.letters) cur = braid_apply_letter(cur, idx, sign);
    return cur;
}

/// A linear map between cocycle modules: an rp x rp integer matrix acting on
/// concatenated cocycle coordinates on the right.
struct CocycleMap {
    MonodromyTuple source;
    MonodromyTuple target;
    IntMat matrix;
};

namespace detail {

inline IntMat phi_generator_matrix(const MonodromyTuple& t, int idx) {
    std::size_t r = t.r(), p = t.rank_p, i = static_cast<std::size_t>(idx) - 1;
    IntMat b(r * p, r * p);
    auto set_block = [&](std::size_t br, std::size_t bc, const IntMat& m) {
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t c = 0; c < p; ++c) b(br * p + a, bc * p + c) = m(a, c);
    };
    IntMat id = IntMat::identity(p);
    for (std::size_t j = 0; j < r; ++j)
        if (j != i && j != i + 1) set_block(j, j, id);
    const IntMat& gi = t.mats[i];
    const IntMat& gi1 = t.mats[i + 1];
    // (v_i, v_{i+1}) -> (v_{i+1}, v_{i+1}(1 - g_{i+1}^{-1} g_i g_{i+1}) + v_i g_{i+1})
    set_block(i + 1, i, id);
    set_block(i, i + 1, gi1);
    set_block(i + 1, i + 1, id - unimodular_inverse(gi1) * gi * gi1);
    return b;
}

}  // namespace detail

/// Phi(g, w): H_g -> H_{g^w}, built letter by letter via the cocycle rule
/// Phi(g, b) Phi(g^b, b') = Phi(g, b b').
inline CocycleMap phi(const MonodromyTuple& t, const BraidWord& w) {
    check_indices(t, w);
    std::size_t n = t.r() * t.rank_p;
    IntMat m = IntMat::identity(n);
    MonodromyTuple cur = t;
    for (auto [idx, sign] : w.letters) {
        if (sign > 0) {
            m = m * detail::phi_generator_matrix(cur, idx);
            cur = braid_apply_letter(cur, idx, 1);
        } else {
            MonodromyTuple nxt = braid_apply_letter(cur, idx, -1);
            m = m * unimodular_inverse(detail::phi_generator_matrix(nxt, idx));
            cur = nxt;
        }
    }
    return {t, cur, std::move(m)};
}

struct TransporterResult {
    IntMat h;                  // primitive integer solution, sign arbitrary
    std::size_t solution_dim;  // 1 for irreducible pairs
    bool unimodular;           // |det h| == 1
};

/// Solve h t2_j = t_j h over Q for all j, returning a primitive integer
/// representative. solution_dim > 1 flags a reducible pair; no solution
/// means the tuples are not globally conjugate.
inline std::optional<TransporterResult> transporter(const MonodromyTuple& t,
                                                    const MonodromyTuple& t2) {
    if (t.rank_p != t2.rank_p || t.r() != t2.r())
        throw std::invalid_argument("transporter: shape mismatch");
    std::size_t p = t.rank_p;
    // unknown vec(h), equations sum_c h(a,c) t2(c,b) - t(a,c) h(c,b) = 0
    std::size_t neq = t.r() * p * p;
    IntMat sys(p * p, neq);
    std::size_t e = 0;
    for (std::size_t j = 0; j < t.r(); ++j) {
        const IntMat& gj = t.mats[j];
        const IntMat& gj2 = t2.mats[j];
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b) {
                for (std::size_t c = 0; c < p; ++c) {
                    sys(a * p + c, e) += gj2(c, b);
                    sys(c * p + b, e) -= gj(a, c);
                }
                ++e;
            }
    }
    Sublattice ker = integer_kernel(sys);
    if (ker.rank() == 0) return std::nullopt;
    std::vector<Int> v = ker.basis.row(0);
    Int g = 0;
    for (const Int& x : v) g = gcd_int(g, x);
    IntMat h(p, p);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) h(a, b) = v[a * p + b] / g;
    Int d = det(h);
    if (d == 0) return std::nullopt;
    return TransporterResult{std::move(h), ker.rank(), d == 1 || d == -1};
}

/// Psi(g, h): block diagonal right-multiplication by h on each component,
/// mapping H_{g'} into H_g for the tuple g' with g'_j h = h g_j.
inline CocycleMap psi(const MonodromyTuple& t, const IntMat& h) {
    std::size_t r = t.r(), p = t.rank_p;
    if (h.rows() != p || h.cols() != p)
        throw std::invalid_argument("psi: shape mismatch");
    IntMat m(r * p, r * p);
    for (std::size_t s = 0; s < r; ++s)
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b) m(s * p + a, s * p + b) = h(a, b);
    return {t, t, std::move(m)};
}

/// Normalize the sign of a projective representative: first nonzero entry
/// positive (row-major scan).
inline IntMat canonical_sign(IntMat m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j) == 0) continue;
            return m(i, j) > 0 ? m : -m;
        }
    return m;
}

struct SignHints {
    // one entry per braid word: the trace the sign-fixed matrix must have;
    // nullopt leaves the canonical projective representative
    std::vector<std::optional<Int>> trace_targets;
    // trace target for the product-inverse matrix at infinity; fixes the sign
    // of the single remaining undetermined word
    std::optional<Int> infinity_trace;
};

struct MonodromyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flip signs to meet the trace targets. Strict mode throws on unmatchable
/// targets; lenient mode leaves the canonical representative and reports
/// false. The infinity target pins the one remaining undetermined word via
/// the product-inverse matrix.
inline bool apply_sign_hints(std::vector<IntMat>& etas, const SignHints& hints,
                             bool strict) {
    bool all_fixed = true;
    if (!hints.trace_targets.empty() && hints.trace_targets.size() != etas.size())
        throw std::invalid_argument("sign hints: wrong count");
    std::vector<std::size_t> unfixed;
    for (std::size_t i = 0; i < etas.size(); ++i) {
        std::optional<Int> tgt =
            i < hints.trace_targets.size() ? hints.trace_targets[i] : std::nullopt;
        if (!tgt) {
            unfixed.push_back(i);
            all_fixed = false;
            continue;
        }
        Int tr = trace(etas[i]);
        if (tr == *tgt) continue;
        if (-tr == *tgt) {
            etas[i] = -etas[i];
        } else if (strict) {
            throw MonodromyError("trace target unmatchable by +-1 at word " +
                                 std::to_string(i + 1));
        } else {
            unfixed.push_back(i);
            all_fixed = false;
        }
    }
    if (hints.infinity_trace && !etas.empty()) {
        std::size_t d = etas.front().rows();
        IntMat prod = IntMat::identity(d);
        for (const IntMat& e : etas) prod = prod * e;
        Int tr = trace(unimodular_inverse(prod));
        if (tr != *hints.infinity_trace) {
            if (unfixed.size() == 1 && -tr == *hints.infinity_trace) {
                etas[unfixed[0]] = -etas[unfixed[0]];
                all_fixed = true;
            } else if (strict) {
                throw MonodromyError("infinity trace target unmatchable");
            } else {
                all_fixed = false;
            }
        }
    }
    return all_fixed;
}

/// Monodromy of parabolic cohomology: for each braid word w, the matrix of
/// eta = Phi(g, w) . Psi(g, h) restricted to the free quotient basis of W,
/// with h the transporter solving g^w_j h = h g_j. Output is the canonical
/// projective representative unless sign hints pin the sign.
inline std::vector<IntMat> monodromy_on_W(const ParabolicModule& m,
                                          const std::vector<BraidWord>& words,
                                          const SignHints* hints = nullptr) {
    std::vector<IntMat> out;
    const MonodromyTuple& t = m.tuple;
    std::size_t d = m.rank();
    for (const BraidWord& w : words) {
        CocycleMap f = phi(t, w);
        auto tr = transporter(f.target, t);
        if (!tr)
            throw MonodromyError("no transporter: tuple after braid is not globally conjugate");
        if (tr->solution_dim > 1)
            throw MonodromyError("transporter space has dimension " +
                                 std::to_string(tr->solution_dim) +
                                 " (reducible tuple)");
        IntMat ambient = f.matrix * psi(t, tr->h).matrix;
        IntMat eta(d, d);
        try {
            for (std::size_t i = 0; i < d; ++i) {
                std::vector<Int> img = m.W_basis.basis.row(i) * ambient;
                eta.set_row(i, free_quotient_coords(m, img));
            }
        } catch (const std::domain_error&) {
            throw MonodromyError(tr->unimodular
                                     ? "restricted monodromy is not integral"
                                     : "restricted monodromy is not integral "
                                       "(transporter det != +-1)");
        }
        if (!tr->unimodular) {
            // Psi is only Q-defined on cocycles, but the induced W map must
            // stay integral and unimodular; anything else is a convention bug.
            Int dd = det(eta);
            if (dd != 1 && dd != -1)
                throw MonodromyError("restricted monodromy is not unimodular");
        }
        out.push_back(canonical_sign(std::move(eta)));
    }
    if (hints) apply_sign_hints(out, *hints, /*strict=*/true);
    return out;
}

}  // namespace parcohom
