#include "doctest.h"

#include <random>

#include "h4/abelian.hpp"
#include "h4/fpmatrix.hpp"
#include "h4/intmatrix.hpp"

using namespace h4;

namespace {

IntMat random_sparse(std::mt19937_64& rng, int rows, int cols, int nnz, int max_abs) {
    IntMat m(rows, cols);
    for (int k = 0; k < nnz; ++k) {
        int i = static_cast<int>(rng() % rows);
        int j = static_cast<int>(rng() % cols);
        long long v = static_cast<long long>(rng() % (2 * max_abs + 1)) - max_abs;
        m.add_to(i, j, BigInt(v));
    }
    return m;
}

BigInt det3(const IntMat& m) {
    auto a = [&](int i, int j) { return m.at(i, j); };
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

}  // namespace

TEST_CASE("abelian group normalization and printing") {
    AbelianGroup g = AbelianGroup::from_orders({2, 3});
    CHECK(g.invariant_factors() == std::vector<long long>{6});
    CHECK(g.to_string() == "6");

    AbelianGroup h = AbelianGroup::from_orders({2, 24});
    CHECK(h.invariant_factors() == std::vector<long long>{2, 24});
    CHECK(h.to_string() == "2 x 24");

    AbelianGroup x9 = AbelianGroup::from_orders({2, 2, 2, 2, 2, 2, 2, 2, 2, 8});
    CHECK(x9.to_string() == "2^9 x 8");

    CHECK(AbelianGroup::trivial().to_string() == "1");
    CHECK(AbelianGroup::from_orders({0, 0}).to_string() == "Z^2");
    CHECK(AbelianGroup::from_orders({4, 6}).invariant_factors() == std::vector<long long>{2, 12});
}

TEST_CASE("primary part") {
    AbelianGroup g = AbelianGroup::from_orders({2, 24});
    CHECK(g.primary_part(2).to_string() == "2 x 8");
    CHECK(g.primary_part(3).to_string() == "3");
    CHECK(AbelianGroup::cyclic(12).primary_part(5).is_trivial());
    // H3 of the double cover of M12 is 8 x 24; its 3-part is Z/3
    CHECK(AbelianGroup::from_orders({8, 24}).primary_part(3).to_string() == "3");
}

TEST_CASE("primary parts over all primes reconstruct the group") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 200; ++it) {
        std::vector<long long> orders;
        int k = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < k; ++i) orders.push_back(1 + static_cast<long long>(rng() % 60));
        AbelianGroup g = AbelianGroup::from_orders(orders);
        AbelianGroup acc = AbelianGroup::trivial();
        for (long long p : g.primes()) acc = acc.direct_sum(g.primary_part(p));
        CHECK(acc == g);
    }
}

TEST_CASE("summand recognition") {
    auto G = [](std::initializer_list<long long> l) { return AbelianGroup::from_orders(l); };
    CHECK(G({2}).is_summand_of(G({2, 8})));
    CHECK(G({4}).is_summand_of(G({2, 4})));
    CHECK_FALSE(G({4}).is_summand_of(G({2, 8})));
    CHECK_FALSE(G({2, 4}).is_summand_of(G({2, 8})));
    CHECK(G({8}).is_summand_of(G({2, 8})));
    CHECK_FALSE(G({8}).is_summand_of(G({2, 4})));
    CHECK(G({6}).is_summand_of(G({2, 3})));
    CHECK(AbelianGroup::trivial().is_summand_of(G({2})));
}

TEST_CASE("snf of diag(2,3) has invariant factors 1,6") {
    IntMat m = IntMat::diagonal({2, 3});
    SnfResult s = smith_normal_form(m);
    REQUIRE(s.rank == 2);
    CHECK(s.invariant_factors[0].to_int64() == 1);
    CHECK(s.invariant_factors[1].to_int64() == 6);
    // transforms multiply back to the diagonal
    IntMat d = s.U->mul(m).mul(*s.V);
    CHECK(d.at(0, 0).to_int64() == 1);
    CHECK(d.at(1, 1).to_int64() == 6);
    CHECK(d.at(0, 1).is_zero());
    CHECK(d.at(1, 0).is_zero());
}

TEST_CASE("snf of zero matrix") {
    IntMat m(2, 2);
    SnfResult s = smith_normal_form(m);
    CHECK(s.rank == 0);
    CHECK(s.invariant_factors.empty());
    CHECK(cokernel_group(m).to_string() == "Z^2");
}

TEST_CASE("snf randomized re-multiplication and unimodularity") {
    std::mt19937_64 rng(42);
    for (int it = 0; it < 60; ++it) {
        int rows = 1 + static_cast<int>(rng() % 8);
        int cols = 1 + static_cast<int>(rng() % 8);
        IntMat m = random_sparse(rng, rows, cols, static_cast<int>(rng() % 20), 9);
        SnfResult s = smith_normal_form(m, SNF_U | SNF_V | SNF_UINV | SNF_VINV);
        IntMat d = s.U->mul(m).mul(*s.V);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                if (i == j && i < s.rank) {
                    CHECK(d.at(i, j) == s.invariant_factors[i]);
                } else {
                    CHECK(d.at(i, j).is_zero());
                }
            }
        for (int i = 0; i + 1 < s.rank; ++i)
            CHECK((s.invariant_factors[i + 1] % s.invariant_factors[i]).is_zero());
        CHECK(s.U->mul(*s.Uinv) == IntMat::identity(rows));
        CHECK(s.Vinv->mul(*s.V) == IntMat::identity(cols));
    }
}

TEST_CASE("cokernel examples") {
    IntMat m8(1, 1);
    m8.set(0, 0, BigInt(8));
    CHECK(cokernel_group(m8).to_string() == "8");

    CHECK(cokernel_group(IntMat::diagonal({2, 3})).to_string() == "6");

    IntMat empty(2, 0);
    CHECK(cokernel_group(empty).to_string() == "Z^2");
}

TEST_CASE("cokernel invariant under unimodular row and column transformations") {
    std::mt19937_64 rng(1234);
    for (int it = 0; it < 40; ++it) {
        int rows = 2 + static_cast<int>(rng() % 5);
        int cols = 2 + static_cast<int>(rng() % 5);
        IntMat m = random_sparse(rng, rows, cols, static_cast<int>(rng() % 15), 6);
        AbelianGroup before = cokernel_group(m);
        IntMat t = m;
        for (int k = 0; k < 6; ++k) {
            long long c = static_cast<long long>(rng() % 7) - 3;
            if (rng() & 1) {
                int a = static_cast<int>(rng() % rows), b = static_cast<int>(rng() % rows);
                if (a != b) t.row_axpy(a, b, BigInt(c));
            } else {
                int a = static_cast<int>(rng() % cols), b = static_cast<int>(rng() % cols);
                if (a != b) t.col_axpy(a, b, BigInt(c));
            }
        }
        CHECK(cokernel_group(t) == before);
    }
}

TEST_CASE("kernel basis spans the kernel") {
    std::mt19937_64 rng(77);
    for (int it = 0; it < 40; ++it) {
        int rows = 1 + static_cast<int>(rng() % 5);
        int cols = 1 + static_cast<int>(rng() % 6);
        IntMat m = random_sparse(rng, rows, cols, static_cast<int>(rng() % 12), 5);
        IntMat k = kernel_basis(m);
        CHECK(m.mul(k).is_zero());
        // columns are part of a unimodular matrix, hence primitive/independent
        SnfResult s = smith_normal_form(k, SNF_NONE);
        CHECK(s.rank == k.cols());
        for (const BigInt& d : s.invariant_factors) CHECK(d.is_one());
    }
}

TEST_CASE("solve_int solves exactly when solvable") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 40; ++it) {
        int rows = 2 + static_cast<int>(rng() % 5);
        int cols = 1 + static_cast<int>(rng() % 4);
        int rhs = 1 + static_cast<int>(rng() % 3);
        IntMat k = random_sparse(rng, rows, cols, 3 + static_cast<int>(rng() % 10), 4);
        IntMat w = random_sparse(rng, cols, rhs, 3 + static_cast<int>(rng() % 6), 4);
        IntMat b = k.mul(w);
        IntMat sol;
        REQUIRE(solve_int(k, b, sol));
        CHECK(k.mul(sol) == b);
    }
}

TEST_CASE("fp kernel examples") {
    CHECK(FpMat::identity(3, 3).kernel().cols() == 0);
    FpMat z(2, 2, 4);
    CHECK(z.kernel().cols() == 4);

    FpMat m = FpMat::from_rows(5, {{1, 2, 3}, {2, 4, 6}});
    FpMat k = m.kernel();
    CHECK(k.cols() == 2);
    for (int c = 0; c < k.cols(); ++c) {
        std::vector<long long> x(3);
        for (int i = 0; i < 3; ++i) x[i] = k.at(i, c);
        auto y = m.apply(x);
        for (long long v : y) CHECK(v == 0);
    }
}

TEST_CASE("fp inverse and rank") {
    FpMat m = FpMat::from_rows(7, {{1, 2}, {3, 4}});
    CHECK(m.rank() == 2);
    CHECK(m.mul(m.inverse()).is_identity());
    FpMat s = FpMat::from_rows(3, {{1, 2}, {2, 4}});
    CHECK(s.rank() == 1);
}

TEST_CASE("sparse rank mod p agrees with dense rank") {
    std::mt19937_64 rng(11);
    for (long long p : {2LL, 3LL}) {
        for (int it = 0; it < 30; ++it) {
            int rows = 1 + static_cast<int>(rng() % 20);
            int cols = 1 + static_cast<int>(rng() % 20);
            std::vector<Triple> ts;
            FpMat dense(p, rows, cols);
            int nnz = static_cast<int>(rng() % 60);
            for (int k = 0; k < nnz; ++k) {
                int i = static_cast<int>(rng() % rows), j = static_cast<int>(rng() % cols);
                long long v = static_cast<long long>(rng() % 7) - 3;
                ts.push_back({i, j, v});
                dense.set(i, j, dense.at(i, j) + v);
            }
            CHECK(sparse_rank_mod_p(rows, cols, ts, p, -1) == dense.rank());
        }
    }
}

TEST_CASE("snf unimodular determinant check on square transforms") {
    std::mt19937_64 rng(8);
    IntMat m = random_sparse(rng, 3, 3, 7, 5);
    SnfResult s = smith_normal_form(m, SNF_U | SNF_V);
    CHECK(det3(*s.U).abs().is_one());
    CHECK(det3(*s.V).abs().is_one());
}
