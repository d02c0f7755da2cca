#pragma once

#include <random>
#include <vector>

#include "parcohom/kodaira.hpp"
#include "parcohom/local_system.hpp"

namespace parcohom::testing {

inline IntMat sl2_T() { return IntMat{{1, 1}, {0, 1}}; }
inline IntMat sl2_S() { return IntMat{{0, 1}, {-1, 0}}; }

/// Random SL2(Z) element: a word of length <= max_len in T, S and their
/// inverses.
inline IntMat random_sl2(std::mt19937& rng, int max_len = 8) {
    IntMat m = IntMat::identity(2);
    IntMat gens[4] = {sl2_T(), sl2_S(), unimodular_inverse(sl2_T()),
                      unimodular_inverse(sl2_S())};
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<int> pick(0, 3);
    int n = len(rng);
    for (int i = 0; i < n; ++i) m = m * gens[pick(rng)];
    return m;
}

/// Random monodromy tuple: r-1 random slots plus the balancing inverse.
/// Reducible and degenerate samples are kept on purpose.
inline MonodromyTuple random_tuple(std::mt19937& rng, std::size_t r, int max_len = 8) {
    std::vector<IntMat> mats;
    IntMat prod = IntMat::identity(2);
    for (std::size_t i = 0; i + 1 < r; ++i) {
        IntMat g = random_sl2(rng, max_len);
        prod = prod * g;
        mats.push_back(std::move(g));
    }
    mats.push_back(unimodular_inverse(prod));
    GramForm j = make_gram(IntMat{{0, 1}, {-1, 0}}, Symmetry::antisymmetric);
    return make_monodromy_tuple(std::move(mats), {}, j);
}

/// The Section 6 Family 1 homological invariant: I1, II, IV*, I1 at
/// (0, 1, 4, inf).
inline MonodromyTuple family1_tuple() {
    std::vector<IntMat> mats{IntMat{{1, 1}, {0, 1}}, IntMat{{1, 1}, {-1, 0}},
                             IntMat{{0, -1}, {1, -1}}, IntMat{{1, 1}, {0, 1}}};
    GramForm j = make_gram(IntMat{{0, 1}, {-1, 0}}, Symmetry::antisymmetric);
    return make_monodromy_tuple(std::move(mats), {"0", "1", "4", "inf"}, j);
}

}  // namespace parcohom::testing
