#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "parcohom/lattice.hpp"

using namespace parcohom;

TEST_CASE("integer kernel basics") {
    SECTION("invertible matrix has zero kernel") {
        IntMat m{{2, 1}, {1, 1}};
        CHECK(integer_kernel(m).rank() == 0);
    }
    SECTION("zero matrix has full kernel") {
        IntMat z(3, 3);
        CHECK(integer_kernel(z) == full_lattice(3));
    }
    SECTION("rank-one 2x2") {
        IntMat m{{1, 1}, {1, 1}};
        Sublattice k = integer_kernel(m);
        REQUIRE(k.rank() == 1);
        CHECK(k.basis == IntMat{{1, -1}});
    }
}

TEST_CASE("saturation") {
    SECTION("index-2 sublattice of Z^2") {
        Sublattice L = make_lattice(2, IntMat{{2, 0}});
        CHECK(saturate(L).basis == IntMat{{1, 0}});
    }
    SECTION("already saturated") {
        Sublattice L = make_lattice(2, IntMat{{1, 3}});
        CHECK(saturate(L) == L);
    }
    SECTION("full-rank sublattice saturates to the ambient lattice") {
        // span{(2,2),(0,4)} has full rational span, so Z^2 is the only
        // sublattice containing it with torsion-free quotient
        Sublattice L = make_lattice(2, IntMat{{2, 2}, {0, 4}});
        CHECK(saturate(L) == full_lattice(2));
    }
    SECTION("idempotent with equal rank, randomized") {
        std::mt19937 rng(7);
        std::uniform_int_distribution<int> d(-6, 6);
        for (int t = 0; t < 40; ++t) {
            std::size_t n = 2 + rng() % 3, r = 1 + rng() % n;
            IntMat g(r, n);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < n; ++j) g(i, j) = d(rng);
            Sublattice L = make_lattice(n, g);
            Sublattice s1 = saturate(L);
            CHECK(saturate(s1) == s1);
            CHECK(s1.rank() == L.rank());
            CHECK(contains(s1, L));
        }
    }
}

TEST_CASE("quotients") {
    SECTION("Z^2 / 2Z^2") {
        IntMat two = IntMat{{2, 0}, {0, 2}};
        QuotientResult q = quotient(full_lattice(2), make_lattice(2, two));
        CHECK(q.free_lift.rank() == 0);
        REQUIRE(q.torsion.size() == 2);
        CHECK(q.torsion[0] == 2);
        CHECK(q.torsion[1] == 2);
    }
    SECTION("quotient by itself") {
        Sublattice L = make_lattice(2, IntMat{{1, 2}, {0, 5}});
        QuotientResult q = quotient(L, L);
        CHECK(q.free_lift.rank() == 0);
        CHECK(q.torsion.empty());
    }
    SECTION("free quotient of Z^2 by an axis") {
        QuotientResult q = quotient(full_lattice(2), make_lattice(2, IntMat{{1, 0}}));
        REQUIRE(q.free_lift.rank() == 1);
        CHECK(q.free_lift.basis == IntMat{{0, 1}});
        CHECK(q.torsion.empty());
    }
    SECTION("containment violations are rejected") {
        Sublattice big = make_lattice(2, IntMat{{2, 0}, {0, 2}});
        CHECK_THROWS_AS(quotient(big, full_lattice(2)), std::invalid_argument);
    }
    SECTION("equal ranks: torsion product is the index, randomized") {
        std::mt19937 rng(31337);
        std::uniform_int_distribution<int> d(-4, 4);
        for (int t = 0; t < 40; ++t) {
            std::size_t n = 2 + rng() % 2;
            IntMat m(n, n);
            do {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
            } while (det(m) == 0);
            Sublattice small = make_lattice(n, m);
            QuotientResult q = quotient(full_lattice(n), small);
            Int prod = 1;
            for (const Int& f : q.torsion) prod *= f;
            CHECK(prod == abs_int(det(m)));
        }
    }
}

TEST_CASE("membership coordinates") {
    Sublattice L = make_lattice(3, IntMat{{1, 0, 2}, {0, 2, 0}});
    CHECK(contains(L, {1, 2, 2}));
    CHECK_FALSE(contains(L, {0, 1, 0}));
    CHECK_FALSE(contains(L, {0, 0, 1}));
    auto c = coords_in(L, {2, 4, 4});
    REQUIRE(c.has_value());
    CHECK((*c)[0] == 2);
    CHECK((*c)[1] == 2);
}
