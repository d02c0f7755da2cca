#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "parcohom/local_system.hpp"

namespace parcohom {

/// Kodaira singular fibre kinds. IN carries n >= 0 (I0 = smooth torus) and
/// INs carries n >= 0 (I0* allowed).
enum class FiberKind { IN, II, III, IV, INs, IVs, IIIs, IIs };

struct KodairaFiber {
    FiberKind kind;
    long n = 0;  // only for IN / INs

    bool operator==(const KodairaFiber&) const = default;
};

inline std::string to_string(const KodairaFiber& f) {
    switch (f.kind) {
        case FiberKind::IN: return "I" + std::to_string(f.n);
        case FiberKind::II: return "II";
        case FiberKind::III: return "III";
        case FiberKind::IV: return "IV";
        case FiberKind::INs: return "I" + std::to_string(f.n) + "*";
        case FiberKind::IVs: return "IV*";
        case FiberKind::IIIs: return "III*";
        case FiberKind::IIs: return "II*";
    }
    return "?";
}

inline std::optional<KodairaFiber> fiber_from_string(const std::string& s) {
    if (s == "II") return KodairaFiber{FiberKind::II};
    if (s == "III") return KodairaFiber{FiberKind::III};
    if (s == "IV") return KodairaFiber{FiberKind::IV};
    if (s == "II*") return KodairaFiber{FiberKind::IIs};
    if (s == "III*") return KodairaFiber{FiberKind::IIIs};
    if (s == "IV*") return KodairaFiber{FiberKind::IVs};
    if (s.size() >= 2 && s[0] == 'I') {
        bool star = s.back() == '*';
        std::string num = s.substr(1, s.size() - 1 - (star ? 1 : 0));
        if (num.empty()) return std::nullopt;
        for (char c : num)
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        long n = std::stol(num);
        return KodairaFiber{star ? FiberKind::INs : FiberKind::IN, n};
    }
    return std::nullopt;
}

inline long euler_number(const KodairaFiber& f) {
    switch (f.kind) {
        case FiberKind::IN: return f.n;
        case FiberKind::II: return 2;
        case FiberKind::III: return 3;
        case FiberKind::IV: return 4;
        case FiberKind::INs: return f.n + 6;
        case FiberKind::IVs: return 8;
        case FiberKind::IIIs: return 9;
        case FiberKind::IIs: return 10;
    }
    return 0;
}

inline bool is_multiplicative(const KodairaFiber& f) {
    return f.kind == FiberKind::IN && f.n >= 1;
}

/// True for the unstarred kinds I_N, II, III, IV (the Sigma^+ fibres).
inline bool is_unstarred(const KodairaFiber& f) {
    return f.kind == FiberKind::IN || f.kind == FiberKind::II ||
           f.kind == FiberKind::III || f.kind == FiberKind::IV;
}

/// Local monodromy from Kodaira's table.
inline IntMat local_monodromy(const KodairaFiber& f) {
    switch (f.kind) {
        case FiberKind::IN: return IntMat{{1, Int(f.n)}, {0, 1}};
        case FiberKind::II: return IntMat{{1, 1}, {-1, 0}};
        case FiberKind::III: return IntMat{{0, 1}, {-1, 0}};
        case FiberKind::IV: return IntMat{{0, 1}, {-1, -1}};
        case FiberKind::INs: return IntMat{{-1, Int(-f.n)}, {0, -1}};
        case FiberKind::IVs: return IntMat{{-1, -1}, {1, 0}};
        case FiberKind::IIIs: return IntMat{{0, -1}, {1, 0}};
        case FiberKind::IIs: return IntMat{{0, -1}, {1, 1}};
    }
    return IntMat::identity(2);
}

/// Kodaira type from the vanishing orders of g2, g3, Delta at the place.
/// Requires a minimal model (ord g2 < 4 or ord g3 < 6).
inline KodairaFiber kodaira_classify(long ord_g2, long ord_g3, long ord_delta) {
    if (ord_g2 < 0 || ord_g3 < 0 || ord_delta < 0)
        throw std::invalid_argument("kodaira_classify: negative vanishing order");
    if (ord_g2 >= 4 && ord_g3 >= 6)
        throw std::invalid_argument("kodaira_classify: non-minimal model");
    if (ord_delta == 0) return {FiberKind::IN, 0};
    if (ord_g2 == 0 && ord_g3 == 0) return {FiberKind::IN, ord_delta};
    if (ord_g2 >= 1 && ord_g3 == 1 && ord_delta == 2) return {FiberKind::II};
    if (ord_g2 == 1 && ord_g3 >= 1 && ord_delta == 3) return {FiberKind::III};
    if (ord_g2 >= 2 && ord_g3 == 2 && ord_delta == 4) return {FiberKind::IV};
    if (ord_g2 >= 2 && ord_g3 >= 3 && ord_delta == 6) return {FiberKind::INs, 0};
    if (ord_g2 == 2 && ord_g3 == 3 && ord_delta >= 7)
        return {FiberKind::INs, ord_delta - 6};
    if (ord_g2 >= 3 && ord_g3 == 4 && ord_delta == 8) return {FiberKind::IVs};
    if (ord_g2 == 3 && ord_g3 >= 5 && ord_delta == 9) return {FiberKind::IIIs};
    if (ord_g2 >= 4 && ord_g3 == 5 && ord_delta == 10) return {FiberKind::IIs};
    throw std::invalid_argument("kodaira_classify: no matching row for orders (" +
                                std::to_string(ord_g2) + "," + std::to_string(ord_g3) +
                                "," + std::to_string(ord_delta) + ")");
}

/// The quadratic twist exchanges starred and unstarred kinds; the local
/// monodromy picks up a factor of -1.
inline KodairaFiber twist_fiber(const KodairaFiber& f) {
    switch (f.kind) {
        case FiberKind::IN: return {FiberKind::INs, f.n};
        case FiberKind::INs: return {FiberKind::IN, f.n};
        case FiberKind::II: return {FiberKind::IVs};
        case FiberKind::IVs: return {FiberKind::II};
        case FiberKind::III: return {FiberKind::IIIs};
        case FiberKind::IIIs: return {FiberKind::III};
        case FiberKind::IV: return {FiberKind::IIs};
        case FiberKind::IIs: return {FiberKind::IV};
    }
    return f;
}

struct FiberConfiguration {
    std::vector<std::pair<std::string, KodairaFiber>> fibers;  // (place, kind)
    std::optional<std::size_t> infinity_index;
};

inline long euler_characteristic(const FiberConfiguration& c) {
    long chi = 0;
    for (const auto& [place, f] : c.fibers) chi += euler_number(f);
    return chi;
}

/// Chirality-exact Kodaira class of an SL2(Z) element, or nullopt when the
/// matrix is hyperbolic (trace outside [-2, 2]).
inline std::optional<KodairaFiber> sl2_local_type(const IntMat& m) {
    if (m.rows() != 2 || !m.is_square() || det(m) != 1) return std::nullopt;
    Int tr = trace(m);
    Int c = m(1, 0);
    if (tr == 2 || tr == -2) {
        bool star = (tr == -2);
        IntMat k = star ? IntMat(-m - IntMat::identity(2))
                        : IntMat(m - IntMat::identity(2));
        Int content = gcd_int(gcd_int(k(0, 0), k(0, 1)), gcd_int(k(1, 0), k(1, 1)));
        if (content == 0)
            return KodairaFiber{star ? FiberKind::INs : FiberKind::IN, 0};
        // K = content * A with A = [[-xy, x^2], [-y^2, xy]] iff positive class T^content
        bool positive = k(0, 1) > 0 || (k(0, 1) == 0 && k(1, 0) < 0);
        if (!positive) return std::nullopt;  // conjugate of T^{-n}: not a Kodaira class
        return KodairaFiber{star ? FiberKind::INs : FiberKind::IN,
                            static_cast<long>(content)};
    }
    if (tr == 1) return KodairaFiber{c < 0 ? FiberKind::II : FiberKind::IIs};
    if (tr == 0) return KodairaFiber{c < 0 ? FiberKind::III : FiberKind::IIIs};
    if (tr == -1) return KodairaFiber{c < 0 ? FiberKind::IV : FiberKind::IVs};
    return std::nullopt;
}

/// The rank-2 homological invariant of an elliptic surface from its fibre
/// configuration and explicit monodromy matrices. The matrices are required:
/// the global product constraint cannot be synthesized from local types.
/// Each matrix must lie in the SL2(Z) conjugacy class of its fibre's Table
/// row; the symplectic fibre pairing is attached.
inline MonodromyTuple build_homological_invariant(const FiberConfiguration& c,
                                                  const std::vector<IntMat>& mats) {
    if (mats.empty())
        throw std::invalid_argument(
            "build_homological_invariant: explicit matrices required "
            "(local types do not determine the tuple)");
    if (mats.size() != c.fibers.size())
        throw std::invalid_argument("build_homological_invariant: count mismatch");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < mats.size(); ++i) {
        auto got = sl2_local_type(mats[i]);
        const KodairaFiber& want = c.fibers[i].second;
        if (!got || !(*got == want))
            throw std::invalid_argument(
                "build_homological_invariant: slot " + std::to_string(i + 1) +
                " has class " + (got ? to_string(*got) : std::string("none")) +
                ", expected " + to_string(want));
        labels.push_back(c.fibers[i].first);
    }
    GramForm j = make_gram(IntMat{{0, 1}, {-1, 0}}, Symmetry::antisymmetric);
    MonodromyTuple t = make_monodromy_tuple(mats, labels, j);
    auto bad = validate(t);
    if (!bad.empty())
        throw std::invalid_argument("build_homological_invariant: " + bad.front());
    return t;
}

/// Quadratic twist of a rank-2 tuple at the fixed slot and a moving smooth
/// point: inserts -I at moving_position and negates the fixed slot. The two
/// Kummer factors cancel at infinity, so the product stays the identity;
/// this is asserted, not assumed.
inline MonodromyTuple twist_tuple(const MonodromyTuple& t, std::size_t fixed_index,
                                  std::size_t moving_position,
                                  const std::string& moving_label = "a") {
    if (t.rank_p != 2) throw std::invalid_argument("twist_tuple: rank-2 tuples only");
    if (fixed_index >= t.r() || moving_position > t.r())
        throw std::invalid_argument("twist_tuple: slot out of range");
    std::vector<IntMat> mats;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < t.r(); ++i) {
        if (i == moving_position) {
            mats.push_back(-IntMat::identity(2));
            labels.push_back(moving_label);
        }
        mats.push_back(i == fixed_index ? -t.mats[i] : t.mats[i]);
        labels.push_back(t.points[i]);
    }
    if (moving_position == t.r()) {
        mats.push_back(-IntMat::identity(2));
        labels.push_back(moving_label);
    }
    MonodromyTuple out = make_monodromy_tuple(std::move(mats), std::move(labels), t.pairing);
    if (!(tuple_product(out) == IntMat::identity(2)))
        throw std::logic_error("twist_tuple: product identity lost");
    return out;
}

}  // namespace parcohom
