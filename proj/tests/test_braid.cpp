#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "parcohom/braid.hpp"

using namespace parcohom;
using namespace parcohom::testing;

namespace {

bool maps_into(const Sublattice& src, const IntMat& map, const Sublattice& dst) {
    for (std::size_t i = 0; i < src.rank(); ++i)
        if (!contains(dst, src.basis.row(i) * map)) return false;
    return true;
}

}  // namespace

TEST_CASE("braid word grammar") {
    BraidWord w = parse_braid("b1^2 * b2^-1 * b1^-1");
    REQUIRE(w.letters.size() == 4);
    CHECK(w.letters[0] == std::pair<int, int>(1, 1));
    CHECK(w.letters[2] == std::pair<int, int>(2, -1));
    CHECK(parse_braid("  b1^2b2^-1 b1^-1").letters == w.letters);
    CHECK(to_string(w) == "b1^2 b2^-1 b1^-1");
    CHECK(parse_braid(to_string(w)).letters == w.letters);
    CHECK(parse_braid("").letters.empty());
    CHECK_THROWS_AS(parse_braid("x1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_braid("b"), std::invalid_argument);
    CHECK_THROWS_AS(parse_braid("b0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_braid("b1^"), std::invalid_argument);
    CHECK_THROWS_AS(parse_braid("b1^0"), std::invalid_argument);
}

TEST_CASE("braid action on tuples") {
    std::mt19937 rng(11);
    SECTION("displayed generator action") {
        MonodromyTuple t = random_tuple(rng, 3);
        MonodromyTuple u = braid_apply(t, parse_braid("b1"));
        CHECK(u.mats[0] == t.mats[1]);
        CHECK(u.mats[1] == unimodular_inverse(t.mats[1]) * t.mats[0] * t.mats[1]);
        CHECK(u.mats[2] == t.mats[2]);
        CHECK(tuple_product(u) == IntMat::identity(2));
    }
    SECTION("a letter against its inverse") {
        for (int i = 0; i < 10; ++i) {
            MonodromyTuple t = random_tuple(rng, 4);
            CHECK(braid_apply(t, parse_braid("b2 b2^-1")).mats == t.mats);
            CHECK(braid_apply(t, parse_braid("b2^-1 b2")).mats == t.mats);
        }
    }
    SECTION("braid relation acts trivially") {
        BraidWord rel = parse_braid("b1 b2 b1") * parse_braid("b2 b1 b2").inverse();
        for (int i = 0; i < 10; ++i) {
            MonodromyTuple t = random_tuple(rng, 4);
            CHECK(braid_apply(t, rel).mats == t.mats);
        }
    }
    SECTION("out-of-range index is rejected") {
        MonodromyTuple t = random_tuple(rng, 3);
        CHECK_THROWS_AS(braid_apply(t, parse_braid("b3")), std::invalid_argument);
    }
}

TEST_CASE("phi basics") {
    std::mt19937 rng(22);
    SECTION("empty word is the identity map") {
        MonodromyTuple t = random_tuple(rng, 3);
        CocycleMap f = phi(t, BraidWord{});
        CHECK(f.matrix == IntMat::identity(6));
    }
    SECTION("cocycle rule: a letter against its inverse") {
        for (int i = 0; i < 8; ++i) {
            MonodromyTuple t = random_tuple(rng, 4);
            CocycleMap f = phi(t, parse_braid("b2 b2^-1"));
            CHECK(f.matrix == IntMat::identity(8));
            CHECK(f.target.mats == t.mats);
        }
    }
    SECTION("braid relation as exact matrix identity") {
        for (int i = 0; i < 8; ++i) {
            MonodromyTuple t = random_tuple(rng, 4);
            CHECK(phi(t, parse_braid("b1 b2 b1")).matrix ==
                  phi(t, parse_braid("b2 b1 b2")).matrix);
        }
    }
    SECTION("far commutation as exact matrix identity") {
        for (int i = 0; i < 8; ++i) {
            MonodromyTuple t = random_tuple(rng, 5);
            CHECK(phi(t, parse_braid("b1 b3")).matrix ==
                  phi(t, parse_braid("b3 b1")).matrix);
        }
    }
    SECTION("phi maps H and E into the braided H and E") {
        for (int i = 0; i < 10; ++i) {
            MonodromyTuple t = random_tuple(rng, 4);
            BraidWord w;
            std::uniform_int_distribution<int> idx(1, 3), sgn(0, 1);
            for (int k = 0; k < 5; ++k)
                w.letters.emplace_back(idx(rng), sgn(rng) ? 1 : -1);
            CocycleMap f = phi(t, w);
            CHECK(maps_into(cocycle_lattice(t), f.matrix, cocycle_lattice(f.target)));
            CHECK(maps_into(coboundary_lattice(t), f.matrix,
                            coboundary_lattice(f.target)));
        }
    }
}

TEST_CASE("transporter") {
    std::mt19937 rng(33);
    MonodromyTuple t = family1_tuple();
    SECTION("a tuple transports to itself by a scalar") {
        auto tr = transporter(t, t);
        REQUIRE(tr.has_value());
        CHECK(tr->solution_dim == 1);
        IntMat id = IntMat::identity(2);
        CHECK((tr->h == id || tr->h == -id));
    }
    SECTION("a constructed conjugation is recovered up to sign") {
        IntMat u = IntMat{{2, 1}, {1, 1}};
        IntMat uinv = unimodular_inverse(u);
        MonodromyTuple conj = t;
        // t2_j = u^-1 t_j u, so h = u solves h t2_j = t_j h
        for (IntMat& g : conj.mats) g = uinv * g * u;
        auto tr = transporter(t, conj);
        REQUIRE(tr.has_value());
        CHECK((tr->h == u || tr->h == -u));
        CHECK(tr->unimodular);
    }
    SECTION("family loops transport back") {
        // Words in the image of a braiding map admit transporters; arbitrary
        // braid words do not (they permute the slot conjugacy classes).
        // Twist families with a central slot realize the canonical loops.
        for (int i = 0; i < 6; ++i) {
            MonodromyTuple base = random_tuple(rng, 3);
            std::vector<IntMat> mats{-IntMat::identity(2)};
            for (std::size_t s = 0; s < base.r(); ++s)
                mats.push_back(s == 0 ? IntMat(-base.mats[s]) : base.mats[s]);
            MonodromyTuple tw = make_monodromy_tuple(mats);
            for (const char* ws : {"b1^2", "b1^-1 b2^2 b1", "b1^-1 b2^-1 b3^2 b2 b1"}) {
                MonodromyTuple moved = braid_apply(tw, parse_braid(ws));
                auto tr = transporter(moved, tw);
                REQUIRE(tr.has_value());
            }
        }
    }
    SECTION("slot classes obstruct arbitrary words") {
        // b1 moves the II class into slot 1; no global conjugation can match
        // an I1 slot against a II slot
        MonodromyTuple moved = braid_apply(t, parse_braid("b1"));
        CHECK_FALSE(transporter(moved, t).has_value());
    }
}

TEST_CASE("psi") {
    MonodromyTuple t = family1_tuple();
    SECTION("identity and negation") {
        CHECK(psi(t, IntMat::identity(2)).matrix == IntMat::identity(8));
        CHECK(psi(t, -IntMat::identity(2)).matrix == -IntMat::identity(8));
    }
    SECTION("composition matches block multiplication") {
        std::mt19937 rng(44);
        for (int i = 0; i < 8; ++i) {
            IntMat h1 = random_sl2(rng), h2 = random_sl2(rng);
            CHECK(psi(t, h1).matrix * psi(t, h2).matrix == psi(t, h1 * h2).matrix);
        }
    }
}

TEST_CASE("monodromy_on_W basics") {
    SECTION("empty braid list") {
        ParabolicModule m = parabolic_cohomology(family1_tuple());
        CHECK(monodromy_on_W(m, {}).empty());
    }
    SECTION("identity word gives the identity") {
        ParabolicModule m = parabolic_cohomology(family1_tuple());
        auto etas = monodromy_on_W(m, {BraidWord{}});
        REQUIRE(etas.size() == 1);
        CHECK(etas[0] == IntMat::identity(2));
    }
    SECTION("eta matrices are unimodular") {
        ParabolicModule m = parabolic_cohomology(family1_tuple());
        auto etas = monodromy_on_W(
            m, {parse_braid("b2^2"), parse_braid("b2^-1 b1^4 b2")});
        for (const IntMat& e : etas) {
            Int d = det(e);
            CHECK((d == 1 || d == -1));
        }
    }
    SECTION("composition law holds projectively") {
        ParabolicModule m = parabolic_cohomology(family1_tuple());
        BraidWord w1 = parse_braid("b2^2");
        BraidWord w2 = parse_braid("b2^-1 b1^4 b2");
        auto etas = monodromy_on_W(m, {w1, w2, w1 * w2});
        CHECK(canonical_sign(etas[0] * etas[1]) == canonical_sign(etas[2]));
    }
    SECTION("a word fixing the tuple acts by Phi alone") {
        // b1^2 fixes any tuple whose first slot is central, so the
        // transporter resolves to +-1 and eta is the restriction of Phi.
        // The twisted Family 1 tuple is irreducible with -1 in slot 1.
        MonodromyTuple base = family1_tuple();
        std::vector<IntMat> mats{-IntMat::identity(2)};
        for (std::size_t s = 0; s < base.r(); ++s)
            mats.push_back(s == 1 ? IntMat(-base.mats[s]) : base.mats[s]);
        MonodromyTuple tw = make_monodromy_tuple(mats, {}, *base.pairing);
        BraidWord w = parse_braid("b1^2");
        CHECK(braid_apply(tw, w).mats == tw.mats);
        ParabolicModule m = parabolic_cohomology(tw);
        REQUIRE(m.rank() == 4);
        auto etas = monodromy_on_W(m, {w});
        CocycleMap f = phi(tw, w);
        IntMat direct(m.rank(), m.rank());
        for (std::size_t i = 0; i < m.rank(); ++i)
            direct.set_row(
                i, free_quotient_coords(m, m.W_basis.basis.row(i) * f.matrix));
        CHECK(canonical_sign(direct) == etas[0]);
    }
}
