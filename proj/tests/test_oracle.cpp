#include "doctest.h"

#include <numeric>

#include "h4/errors.hpp"
#include "h4/oracle.hpp"

using namespace h4;

namespace {

// Kunneth assembly for H_3 of a product from the low homology of the factors,
// using H^{k+1}(G;Z) = H_k(G;Z) for finite groups: independent cross-check.
AbelianGroup tensor_finite(const AbelianGroup& a, const AbelianGroup& b) {
    std::vector<long long> orders;
    for (long long x : a.invariant_factors())
        for (long long y : b.invariant_factors()) orders.push_back(std::gcd(x, y));
    return AbelianGroup::from_orders(orders);
}

AbelianGroup kunneth_h3(const MultTable& g, const MultTable& h, int cap) {
    AbelianGroup g1 = bar_cohomology(g, 2, cap), g2 = bar_cohomology(g, 3, cap),
                 g3 = bar_cohomology(g, 4, cap);
    AbelianGroup h1 = bar_cohomology(h, 2, cap), h2 = bar_cohomology(h, 3, cap),
                 h3 = bar_cohomology(h, 4, cap);
    AbelianGroup out = g3.direct_sum(h3);
    out = out.direct_sum(tensor_finite(g1, h2));
    out = out.direct_sum(tensor_finite(g2, h1));
    out = out.direct_sum(tensor_finite(g1, h1));  // Tor(A,B) = A (x) B for finite groups
    return out;
}

const H4Presentation& q8_presentation() {
    static H4Presentation pres(MultTable::extraspecial(2, 1, 1));
    return pres;
}

}  // namespace

TEST_CASE("multiplication table validation") {
    CHECK(MultTable::cyclic(6).order() == 6);
    CHECK_THROWS_AS(MultTable::from_table({{0, 1}, {1, 1}}), ValidationError);
    // a latin square that is not associative
    CHECK_THROWS_AS(MultTable::from_table({{0, 1, 2, 3, 4},
                                           {1, 0, 3, 4, 2},
                                           {2, 4, 0, 1, 3},
                                           {3, 2, 4, 0, 1},
                                           {4, 3, 1, 2, 0}}),
                    ValidationError);
    MultTable q8 = MultTable::extraspecial(2, 1, 1);
    MultTable round = MultTable::from_text(q8.to_text());
    CHECK(round.order() == 8);
}

TEST_CASE("extraspecial tables: Q8 vs D8 vs 27") {
    MultTable q8 = MultTable::extraspecial(2, 1, 1);
    int invol = 0;
    for (int i = 1; i < 8; ++i)
        if (q8.element_order(i) == 2) ++invol;
    CHECK(invol == 1);

    MultTable d8 = MultTable::extraspecial(2, 1, 0);
    invol = 0;
    for (int i = 1; i < 8; ++i)
        if (d8.element_order(i) == 2) ++invol;
    CHECK(invol == 5);

    MultTable h27 = MultTable::extraspecial(3, 1, 0);
    CHECK(h27.order() == 27);
    for (int i = 1; i < 27; ++i) CHECK(h27.element_order(i) == 3);  // exponent p
}

TEST_CASE("cyclic closed form") {
    CHECK(cyclic_cohomology(8, 4).to_string() == "8");
    CHECK(cyclic_cohomology(24, 2).to_string() == "24");
    CHECK(cyclic_cohomology(5, 3).is_trivial());
    CHECK(cyclic_cohomology(7, 0).to_string() == "Z");
}

TEST_CASE("bar cohomology matches the cyclic closed form up to order 8") {
    for (int n = 1; n <= 8; ++n) {
        MultTable g = MultTable::cyclic(n);
        for (int k = 0; k <= 4; ++k) {
            CAPTURE(n);
            CAPTURE(k);
            CHECK(bar_cohomology(g, k) == cyclic_cohomology(n, k));
        }
    }
}

TEST_CASE("hard pins: Q8, Klein four group, D8") {
    CHECK(bar_cohomology(MultTable::extraspecial(2, 1, 1), 4).to_string() == "8");
    CHECK(bar_cohomology(MultTable::product(MultTable::cyclic(2), MultTable::cyclic(2)), 4).to_string() ==
          "2^3");
    CHECK(bar_cohomology(MultTable::extraspecial(2, 1, 0), 4).to_string() == "2^2 x 4");
}

TEST_CASE("kunneth assembly agrees with direct bar computation on tiny products") {
    MultTable c2 = MultTable::cyclic(2), c3 = MultTable::cyclic(3), c4 = MultTable::cyclic(4);
    SUBCASE("C2 x C2") {
        CHECK(bar_cohomology(MultTable::product(c2, c2), 4) == kunneth_h3(c2, c2, 12));
    }
    SUBCASE("C2 x C3") {
        CHECK(bar_cohomology(MultTable::product(c2, c3), 4) == kunneth_h3(c2, c3, 12));
    }
    SUBCASE("C2 x C4") {
        CHECK(bar_cohomology(MultTable::product(c2, c4), 4) == kunneth_h3(c2, c4, 12));
    }
}

TEST_CASE("smith data of the bar differentials of Z/4 yields H4 = Z/4") {
    // normalized cochain ranks for order 4 are 3^k: C^3 = 27, C^4 = 81, C^5 = 243
    MultTable c4 = MultTable::cyclic(4);
    auto d3 = bar_coboundary_matrix(c4, 3);
    auto d4 = bar_coboundary_matrix(c4, 4);
    IntMat A = IntMat::from_triples(81, 27, d3);
    IntMat B = IntMat::from_triples(243, 81, d4);
    CHECK(B.mul(A).is_zero());  // a cochain complex

    // the torsion of coker(d3) is exactly the torsion of H^4, since the
    // kernel of d4 is a pure sublattice containing the image of d3
    SnfResult s = smith_normal_form(A, SNF_NONE);
    std::vector<long long> torsion;
    for (const BigInt& d : s.invariant_factors)
        if (!d.is_one()) torsion.push_back(d.to_int64());
    CHECK(torsion == std::vector<long long>{4});

    // and the kernel-rank bookkeeping closes: dim ker(d4) = rank(d3), so the
    // free rank of H^4 vanishes
    SnfResult sb = smith_normal_form(B, SNF_NONE);
    CHECK(81 - sb.rank == s.rank);
}

TEST_CASE("cap is enforced and overridable") {
    MultTable c13 = MultTable::cyclic(13);
    CHECK_THROWS_AS(bar_cohomology(c13, 2), ValidationError);
    CHECK(bar_cohomology(c13, 2, 13).to_string() == "13");
}

TEST_CASE("H4 presentation: classes, generators and arithmetic") {
    const H4Presentation& pres = q8_presentation();
    CHECK(pres.group().to_string() == "8");
    Cocycle gen = pres.generator_cocycle();
    REQUIRE(pres.is_cocycle(gen));
    auto coords = pres.class_of(gen);
    REQUIRE(coords.size() == 1);
    CHECK(std::gcd(coords[0], 8LL) == 1);  // a generator of Z/8

    // doubling the cocycle doubles the class
    Cocycle twice = gen;
    for (auto& [t, v] : twice) v *= 2;
    CHECK(pres.class_of(twice)[0] == (2 * coords[0]) % 8);

    // a non-cocycle is rejected
    Cocycle junk;
    junk[{1, 1, 1, 1}] = 1;
    if (!pres.is_cocycle(junk)) CHECK_THROWS_AS(pres.class_of(junk), ValidationError);
}

TEST_CASE("restriction of H4 classes") {
    SUBCASE("restriction along the identity inclusion is the same class") {
        MultTable c4 = MultTable::cyclic(4);
        H4Presentation pres(c4);
        Cocycle gen = pres.generator_cocycle();
        RestrictionResult full = restriction_on_h4(c4, {0, 1, 2, 3}, gen);
        CHECK(full.h4_subgroup.to_string() == "4");
        CHECK(full.coords == pres.class_of(gen));
    }
    SUBCASE("C4 to C2: the faithful character restricts faithfully, so t^2 survives") {
        MultTable c4 = MultTable::cyclic(4);
        H4Presentation pres(c4);
        RestrictionResult r = restriction_on_h4(c4, {0, 2}, pres.generator_cocycle());
        CHECK(r.h4_subgroup.to_string() == "2");
        CHECK(r.coords == std::vector<long long>{1});
    }
    SUBCASE("Q8 to its center: the order-8 generator, being -c2 of the 2-dim irrep, hits t^2") {
        const H4Presentation& pres = q8_presentation();
        const MultTable& q8 = pres.group_table();
        RestrictionResult r = restriction_on_h4(q8, {0, 1}, pres.generator_cocycle());
        CHECK(r.h4_subgroup.to_string() == "2");
        CHECK(r.coords == std::vector<long long>{1});
    }
    SUBCASE("Q8 to a cyclic subgroup of order 4 restricts onto H4 = Z/4") {
        const H4Presentation& pres = q8_presentation();
        const MultTable& q8 = pres.group_table();
        std::vector<int> sub = {0, 2};
        int cur = q8.mul(2, 2);
        while (cur != 0) {
            sub.push_back(cur);
            cur = q8.mul(cur, 2);
        }
        RestrictionResult r = restriction_on_h4(q8, sub, pres.generator_cocycle());
        CHECK(r.h4_subgroup.to_string() == "4");
        CHECK(std::gcd(r.coords[0], 4LL) == 1);
    }
    SUBCASE("non-closed element sets are rejected") {
        const H4Presentation& pres = q8_presentation();
        CHECK_THROWS_AS(restriction_on_h4(pres.group_table(), {0, 2}, pres.generator_cocycle()),
                        ValidationError);
    }
}
