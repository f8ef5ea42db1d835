#include "doctest.h"

#include <atomic>
#include <functional>
#include <random>
#include <thread>

#include "h4/charclass.hpp"
#include "h4/chartab.hpp"
#include "h4/errors.hpp"

using namespace h4;

static std::string data_dir = H4_DATA_DIR;

namespace {
Spectrum spec_of(std::initializer_list<std::pair<long long, long long>> init, long long n) {
    Spectrum s;
    s.modulus = n;
    for (auto [j, m] : init)
        if (m) s.mult[((j % n) + n) % n] += m;
    return s;
}

Spectrum table_spectrum(const std::string& file, const std::string& chi, const std::string& cls) {
    CharacterTable t = CharacterTable::load_file(data_dir + "/tables/" + file);
    return t.eigenvalue_spectrum(t.character(chi), t.class_index(cls));
}
}  // namespace

TEST_CASE("chern restriction on the printed spectra") {
    // M11 permutation representation at 8a: c2 = 2 mod 8
    Spectrum m11 = spec_of({{0, 3}, {1, 1}, {2, 1}, {3, 1}, {4, 2}, {5, 1}, {6, 1}, {7, 1}}, 8);
    ChernPair cp = chern_restriction(m11);
    CHECK(cp.modulus == 8);
    CHECK(cp.c2 == 2);

    // O7(3) 105-dim at 4a: c2 = 3 mod 4 (minus the square generator)
    Spectrum o73 = spec_of({{0, 25}, {1, 25}, {2, 30}, {3, 25}}, 4);
    CHECK(chern_restriction(o73).c2 == 3);

    // He chi19 at 4a: c2 = 2 mod 4
    Spectrum he = spec_of({{0, 1938}, {1, 1890}, {2, 1932}, {3, 1890}}, 4);
    CHECK(chern_restriction(he).c2 == 2);

    // 2M22 210-dim at 4c: c2 = 1 mod 4, order 4
    Spectrum m22 = spec_of({{0, 50}, {1, 55}, {2, 50}, {3, 55}}, 4);
    ChernPair m22cp = chern_restriction(m22);
    CHECK(m22cp.c2 == 1);
    CHECK(H4Class{4, m22cp.c2}.order() == 4);
}

TEST_CASE("chern restriction agrees end-to-end with table spectra") {
    CHECK(chern_restriction(table_spectrum("m11.json", "perm", "8a")).c2 == 2);
    CHECK(chern_restriction(table_spectrum("o73_partial.json", "chi105", "4a")).c2 == 3);
    CHECK(chern_restriction(table_spectrum("he_partial.json", "chi19", "4a")).c2 == 2);
    CHECK(chern_restriction(table_spectrum("2m22_partial.json", "chi210", "4c")).c2 == 1);
}

TEST_CASE("whitney c2 on the SL(2,5) decompositions inside the double cover of J2") {
    // pi + 2 pi': c2 values c, 49c, 49c with zero c1, modulus 120 -> 99c, order 40
    ChernPair pi{120, 0, 1}, pio{120, 0, 49};
    ChernPair sum = whitney_c2({pi, pio, pio});
    CHECK(sum.c2 == 99);
    CHECK(H4Class{120, sum.c2}.order() == 40);

    // pi + S^3(pi): c + 10c = 11c, order 120
    ChernPair s3{120, 0, 10};
    ChernPair sum2 = whitney_c2({pi, s3});
    CHECK(sum2.c2 == 11);
    CHECK(H4Class{120, sum2.c2}.order() == 120);

    // trivial summand is a unit
    ChernPair triv{120, 0, 0};
    ChernPair sum3 = whitney_c2({pi, triv});
    CHECK(sum3.c2 == pi.c2);
    CHECK(sum3.c1 == pi.c1);
}

TEST_CASE("whitney c2 is associative and commutative under permutation and regrouping") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 1000; ++it) {
        long long n = 2 + static_cast<long long>(rng() % 23);
        std::vector<ChernPair> parts;
        int k = 2 + static_cast<int>(rng() % 4);
        for (int i = 0; i < k; ++i)
            parts.push_back({n, static_cast<long long>(rng() % n), static_cast<long long>(rng() % n)});
        ChernPair direct = whitney_c2(parts);
        std::vector<ChernPair> shuffled = parts;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        ChernPair permuted = whitney_c2(shuffled);
        CHECK(direct.c1 == permuted.c1);
        CHECK(direct.c2 == permuted.c2);
        // regroup: fold a prefix first
        int cut = 1 + static_cast<int>(rng() % (k - 1));
        ChernPair left = whitney_c2(std::vector<ChernPair>(parts.begin(), parts.begin() + cut));
        std::vector<ChernPair> rest(parts.begin() + cut, parts.end());
        rest.insert(rest.begin(), left);
        ChernPair grouped = whitney_c2(rest);
        CHECK(direct.c1 == grouped.c1);
        CHECK(direct.c2 == grouped.c2);
    }
}

TEST_CASE("whitney formula matches direct e2 of the combined spectrum") {
    std::mt19937_64 rng(23);
    for (long long n = 2; n <= 8; ++n) {
        for (int it = 0; it < 40; ++it) {
            Spectrum a, b;
            a.modulus = b.modulus = n;
            int da = 1 + static_cast<int>(rng() % 6), db = 1 + static_cast<int>(rng() % 6);
            for (int i = 0; i < da; ++i) a.mult[static_cast<long long>(rng() % n)]++;
            for (int i = 0; i < db; ++i) b.mult[static_cast<long long>(rng() % n)]++;
            ChernPair direct = chern_restriction(a.united(b));
            ChernPair folded = whitney_c2({chern_restriction(a), chern_restriction(b)});
            CHECK(direct.c1 == folded.c1);
            CHECK(direct.c2 == folded.c2);
        }
    }
}

TEST_CASE("whitney formula vs direct e2, exhaustive over small split spectra") {
    // every multiset of total size <= 6 over Z/n, split at every point,
    // for n = 2, 3, 4: the fold of the pair equals e2 of the union
    for (long long n = 2; n <= 4; ++n) {
        // enumerate multisets as exponent count vectors summing to <= 6
        std::vector<std::vector<long long>> multisets;
        std::vector<long long> counts(n, 0);
        std::function<void(long long, long long)> rec = [&](long long idx, long long left) {
            if (idx == n) {
                multisets.push_back(counts);
                return;
            }
            for (long long c = 0; c <= left; ++c) {
                counts[idx] = c;
                rec(idx + 1, left - c);
            }
            counts[idx] = 0;
        };
        rec(0, 6);
        auto to_spectrum = [&](const std::vector<long long>& cs) {
            Spectrum s;
            s.modulus = n;
            for (long long j = 0; j < n; ++j)
                if (cs[j]) s.mult[j] = cs[j];
            return s;
        };
        long long checked = 0;
        for (const auto& ca : multisets) {
            for (const auto& cb : multisets) {
                long long tot = 0;
                for (long long j = 0; j < n; ++j) tot += ca[j] + cb[j];
                if (tot > 6 || tot == 0) continue;
                Spectrum a = to_spectrum(ca), b = to_spectrum(cb);
                ChernPair direct = chern_restriction(a.united(b));
                ChernPair folded = whitney_c2({chern_restriction(a), chern_restriction(b)});
                if (direct.c1 != folded.c1 || direct.c2 != folded.c2) {
                    CAPTURE(n);
                    REQUIRE(false);
                }
                ++checked;
            }
        }
        CHECK(checked > 100);
    }
}

TEST_CASE("queries are safe under concurrent use") {
    // immutable tables, pure class functions: hammer the same objects from
    // several threads and require identical answers
    CharacterTable t = CharacterTable::load_file(data_dir + "/tables/m11.json");
    const Character& chi = t.character("perm");
    int cls = t.class_index("8a");
    Spectrum expect = t.eigenvalue_spectrum(chi, cls);
    long long expect_c2 = chern_restriction(expect).c2;
    long long expect_phalf = phalf_restriction(expect, 8).value.value;

    std::vector<std::thread> workers;
    std::atomic<int> mismatches{0};
    for (int w = 0; w < 8; ++w) {
        workers.emplace_back([&]() {
            for (int it = 0; it < 25; ++it) {
                Spectrum s = t.eigenvalue_spectrum(chi, cls);
                if (!(s.mult == expect.mult)) ++mismatches;
                if (chern_restriction(s).c2 != expect_c2) ++mismatches;
                if (phalf_restriction(s, 8).value.value != expect_phalf) ++mismatches;
                if (su2_symmetric_power_c2(4) != 20) ++mismatches;
            }
        });
    }
    for (auto& w : workers) w.join();
    CHECK(mismatches == 0);
}

TEST_CASE("c2 is conjugation invariant") {
    std::mt19937_64 rng(29);
    for (int it = 0; it < 200; ++it) {
        long long n = 2 + static_cast<long long>(rng() % 23);
        Spectrum s;
        s.modulus = n;
        int d = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < d; ++i) s.mult[static_cast<long long>(rng() % n)]++;
        CHECK(chern_restriction(s).c2 == chern_restriction(s.conjugate()).c2);
    }
}

TEST_CASE("p1 restriction") {
    Spectrum m11 = spec_of({{0, 3}, {1, 1}, {2, 1}, {3, 1}, {4, 2}, {5, 1}, {6, 1}, {7, 1}}, 8);
    H4Class p1 = p1_restriction(m11);
    CHECK(p1.modulus == 8);
    CHECK(p1.value == 6);  // 1^2 + 2^2 + 3^2 + 4^2 = 30

    // p1 = -c2 for the complexification (same spectrum)
    CHECK((p1.value + chern_restriction(m11).c2) % 8 == 0);

    Spectrum trivial = spec_of({{0, 5}}, 6);
    CHECK(p1_restriction(trivial).value == 0);

    Spectrum one_pair = spec_of({{3, 1}, {-3, 1}}, 7);
    CHECK(p1_restriction(one_pair).value == 2);  // 3^2 = 9 = 2 mod 7

    Spectrum asym = spec_of({{1, 2}, {6, 1}}, 7);
    CHECK_THROWS_AS(p1_restriction(asym), ValidationError);
}

TEST_CASE("p1 equals minus c2 on random real-symmetric spectra") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 400; ++it) {
        long long n = 2 + static_cast<long long>(rng() % 23);
        Spectrum s;
        s.modulus = n;
        for (int i = 0; i < 1 + static_cast<int>(rng() % 5); ++i) {
            long long j = static_cast<long long>(rng() % n);
            long long m = 1 + static_cast<long long>(rng() % 3);
            s.mult[j] += m;
            if (j != 0 && 2 * j != n) s.mult[n - j] += m;
            if (2 * j == n && m % 2) s.mult[j] += 1;  // keep -1 block even
        }
        long long p1 = p1_restriction(s).value;
        long long c2 = chern_restriction(s).c2;
        CHECK((p1 + c2) % n == 0);
    }
}

TEST_CASE("half pontryagin class on M11 at 8a: 7 mod 8, order 8") {
    Spectrum m11 = spec_of({{0, 3}, {1, 1}, {2, 1}, {3, 1}, {4, 2}, {5, 1}, {6, 1}, {7, 1}}, 8);
    HalfPontryagin hp = phalf_restriction(m11, 8);
    CHECK(hp.value.modulus == 8);
    CHECK(hp.value.value == 7);
    CHECK(hp.value.order() == 8);
    CHECK_FALSE(hp.certificate.parity_adjusted);
}

TEST_CASE("half pontryagin class on He chi19 at 4a has order 4") {
    Spectrum he = spec_of({{0, 1938}, {1, 1890}, {2, 1932}, {3, 1890}}, 4);
    HalfPontryagin hp = phalf_restriction(he, 4);
    CHECK(hp.value.order() == 4);
    // doubling identity at equal lift order
    CHECK((2 * hp.value.value - p1_restriction(he).value) % 4 == 0);
}

TEST_CASE("half pontryagin of the trivial representation vanishes") {
    Spectrum t = spec_of({{0, 10}}, 12);
    CHECK(phalf_restriction(t, 12).value.value == 0);
    CHECK(phalf_restriction(t, 24).value.value == 0);
}

TEST_CASE("doubling identity 2 * phalf = pullback of p1 across lift orders") {
    std::mt19937_64 rng(37);
    int tested = 0;
    for (int it = 0; it < 600 && tested < 300; ++it) {
        long long n = 2 + static_cast<long long>(rng() % 12);
        Spectrum s;
        s.modulus = n;
        for (int i = 0; i < 1 + static_cast<int>(rng() % 4); ++i) {
            long long j = static_cast<long long>(rng() % n);
            long long m = 1 + static_cast<long long>(rng() % 3);
            s.mult[j] += m;
            if (j != 0 && 2 * j != n) s.mult[n - j] += m;
            if (2 * j == n && m % 2) s.mult[j] += 1;
        }
        for (long long lift : {n, 2 * n}) {
            HalfPontryagin hp;
            try {
                hp = phalf_restriction(s, lift);
            } catch (const ValidationError&) {
                continue;  // no spin structure at this lift order
            }
            ++tested;
            long long scale = lift / n;
            long long p1 = p1_restriction(s).value;
            long long lhs = (2 * hp.value.value) % lift;
            long long rhs = (p1 * scale * scale) % lift;
            CHECK((lhs - rhs) % lift == 0);
        }
    }
    CHECK(tested >= 300);
}

TEST_CASE("lift order 2n on the 2M22 210-dim spectrum at 4c") {
    // rotation numbers double mod 8; the value must be compatible with c2 = 1 mod 4
    Spectrum s = spec_of({{0, 50}, {1, 55}, {2, 50}, {3, 55}}, 4);
    HalfPontryagin hp = phalf_restriction(s, 8);
    long long p1 = p1_restriction(s).value;       // mod 4
    CHECK((2 * hp.value.value - p1 * 4) % 8 == 0);  // pullback scales by (2n/n)^2 = 4
}

TEST_CASE("no admissible lift: a single rotation plane with odd weight sum") {
    Spectrum s = spec_of({{1, 1}, {3, 1}}, 4);  // one plane of rotation 1
    CHECK_THROWS_WITH_AS(phalf_restriction(s, 4), doctest::Contains("no admissible lift"),
                         ValidationError);
    // the binary lift exists: rotation doubles to 2 mod 8
    HalfPontryagin hp = phalf_restriction(s, 8);
    CHECK(hp.value.value == 2);  // (2^2)/2 = 2 mod 8
}

TEST_CASE("cup square generators") {
    CupSquarePartition p24 = cup_square_generators(24);
    CHECK(p24.squares == std::vector<long long>{1});
    CHECK(p24.non_squares.size() == 7);

    CupSquarePartition p3 = cup_square_generators(3);
    CHECK(p3.squares == std::vector<long long>{1});
    CHECK(p3.non_squares == std::vector<long long>{2});

    CupSquarePartition p4 = cup_square_generators(4);
    CHECK(p4.squares == std::vector<long long>{1});
    CHECK(p4.non_squares == std::vector<long long>{3});

    // every divisor of 24 has the single square generator 1
    for (long long n : {2, 3, 4, 6, 8, 12, 24})
        CHECK(cup_square_generators(n).squares == std::vector<long long>{1});
    // contrast: mod 5 both 1 and 4 are squares
    CupSquarePartition p5 = cup_square_generators(5);
    CHECK(p5.squares == std::vector<long long>{1, 4});
}

TEST_CASE("su2 symmetric power c2 ladder") {
    CHECK(su2_symmetric_power_c2(0) == 0);
    CHECK(su2_symmetric_power_c2(1) == 1);
    CHECK(su2_symmetric_power_c2(2) == 4);
    CHECK(su2_symmetric_power_c2(3) == 10);
    CHECK(su2_symmetric_power_c2(4) == 20);
    CHECK(su2_symmetric_power_c2(5) == 35);
}

TEST_CASE("phalf well-definedness audit covers every rotation class") {
    Spectrum m11 = spec_of({{0, 3}, {1, 1}, {2, 1}, {3, 1}, {4, 2}, {5, 1}, {6, 1}, {7, 1}}, 8);
    HalfPontryagin hp = phalf_restriction(m11, 8);
    // rotation values present: 0 (one plane from the 1^3 block), 1, 2, 3, 4
    CHECK(hp.certificate.classes.size() == 5);
    for (const auto& audit : hp.certificate.classes) {
        CHECK(audit.lift_squares_mod_2n.size() <= 2);
        CHECK_FALSE(audit.both_parities);  // even lift order: one parity per class
    }
}
