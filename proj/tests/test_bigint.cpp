#include "doctest.h"

#include <random>

#include "h4/bigint.hpp"

using h4::BigInt;

TEST_CASE("bigint basic arithmetic") {
    CHECK(BigInt(0).is_zero());
    CHECK(BigInt(1).is_one());
    CHECK((BigInt(2) + BigInt(3)).to_int64() == 5);
    CHECK((BigInt(2) - BigInt(3)).to_int64() == -1);
    CHECK((BigInt(-7) * BigInt(6)).to_int64() == -42);
    CHECK((BigInt(7) / BigInt(2)).to_int64() == 3);
    CHECK((BigInt(-7) / BigInt(2)).to_int64() == -3);
    CHECK((BigInt(-7) % BigInt(2)).to_int64() == -1);
    CHECK(BigInt(-7).mod_euclid(BigInt(2)).to_int64() == 1);
}

TEST_CASE("bigint string round trip and large products") {
    BigInt a = BigInt::from_string("123456789012345678901234567890");
    BigInt b = BigInt::from_string("-987654321098765432109876543210");
    CHECK(a.to_string() == "123456789012345678901234567890");
    CHECK(b.to_string() == "-987654321098765432109876543210");
    CHECK((a * b).to_string() ==
          "-121932631137021795226185032733622923332237463801111263526900");
    CHECK(((a * b) / b) == a);
    CHECK(((a * b) % b).is_zero());
}

TEST_CASE("bigint randomized divmod identity against int128") {
    std::mt19937_64 rng(12345);
    for (int it = 0; it < 2000; ++it) {
        long long a = static_cast<long long>(rng()) >> (rng() % 40);
        long long b = static_cast<long long>(rng()) >> (rng() % 50);
        if (b == 0) b = 7;
        BigInt A(a), B(b);
        BigInt q = A / B, r = A % B;
        CHECK(q * B + r == A);
        CHECK(r.abs() < B.abs());
        CHECK(q.to_int64() == a / b);
        CHECK(r.to_int64() == a % b);
    }
}

TEST_CASE("bigint randomized multi-limb divmod round trip") {
    std::mt19937_64 rng(99);
    auto rand_big = [&](int limbs) {
        BigInt x(0);
        for (int i = 0; i < limbs; ++i) x = x * BigInt(1LL << 32) + BigInt(static_cast<long long>(rng() & 0xffffffffULL));
        if (rng() & 1) x = -x;
        return x;
    };
    for (int it = 0; it < 500; ++it) {
        BigInt a = rand_big(1 + static_cast<int>(rng() % 6));
        BigInt b = rand_big(1 + static_cast<int>(rng() % 4));
        if (b.is_zero()) continue;
        BigInt q = a / b, r = a % b;
        CHECK(q * b + r == a);
        CHECK(r.abs() < b.abs());
    }
}

TEST_CASE("bigint gcd and extended gcd") {
    CHECK(BigInt::gcd(BigInt(12), BigInt(18)).to_int64() == 6);
    CHECK(BigInt::gcd(BigInt(0), BigInt(-5)).to_int64() == 5);
    CHECK(BigInt::lcm(BigInt(4), BigInt(6)).to_int64() == 12);
    std::mt19937_64 rng(7);
    for (int it = 0; it < 500; ++it) {
        BigInt a(static_cast<long long>(rng()) >> (rng() % 40));
        BigInt b(static_cast<long long>(rng()) >> (rng() % 40));
        BigInt x, y;
        BigInt g = BigInt::gcd_ext(a, b, x, y);
        CHECK(g == BigInt::gcd(a, b));
        CHECK(a * x + b * y == g);
    }
}
