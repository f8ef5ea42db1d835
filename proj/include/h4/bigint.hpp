#pragma once

#include <cstdint>
#include <string>
#include <vector>
#include <iosfwd>

namespace h4 {

// Arbitrary-precision signed integer, sign-magnitude with 32-bit limbs.
// Matrix entries in bar-resolution differentials are tiny, but elimination
// intermediates are not; everything downstream assumes exact arithmetic.
class BigInt {
public:
    BigInt() = default;
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}
    BigInt(long v) : BigInt(static_cast<long long>(v)) {}
    BigInt(long long v);
    BigInt(unsigned long long v);

    static BigInt from_string(const std::string& s);

    bool is_zero() const { return mag_.empty(); }
    bool is_one() const { return sign_ > 0 && mag_.size() == 1 && mag_[0] == 1; }
    bool is_neg() const { return sign_ < 0; }
    int sign() const { return sign_; }

    BigInt operator-() const;
    BigInt abs() const;

    BigInt operator+(const BigInt& o) const;
    BigInt operator-(const BigInt& o) const;
    BigInt operator*(const BigInt& o) const;
    // Truncated division (C semantics): (a/b)*b + a%b == a, |a%b| < |b|.
    BigInt operator/(const BigInt& o) const;
    BigInt operator%(const BigInt& o) const;

    BigInt& operator+=(const BigInt& o) { *this = *this + o; return *this; }
    BigInt& operator-=(const BigInt& o) { *this = *this - o; return *this; }
    BigInt& operator*=(const BigInt& o) { *this = *this * o; return *this; }

    bool operator==(const BigInt& o) const { return sign_ == o.sign_ && mag_ == o.mag_; }
    bool operator!=(const BigInt& o) const { return !(*this == o); }
    bool operator<(const BigInt& o) const;
    bool operator>(const BigInt& o) const { return o < *this; }
    bool operator<=(const BigInt& o) const { return !(o < *this); }
    bool operator>=(const BigInt& o) const { return !(*this < o); }

    // Euclidean remainder in [0, |m|).
    BigInt mod_euclid(const BigInt& m) const;

    static BigInt gcd(BigInt a, BigInt b);
    // g = gcd(a,b) together with x,y such that a*x + b*y = g (g >= 0).
    static BigInt gcd_ext(const BigInt& a, const BigInt& b, BigInt& x, BigInt& y);
    static BigInt lcm(const BigInt& a, const BigInt& b);

    bool fits_int64() const;
    long long to_int64() const;  // throws if out of range

    std::string to_string() const;

    friend std::ostream& operator<<(std::ostream& os, const BigInt& v);

private:
    int sign_ = 0;                  // 0 iff mag_ empty
    std::vector<uint32_t> mag_;     // little-endian limbs, no trailing zeros

    void trim();
    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static void divmod_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                           std::vector<uint32_t>& q, std::vector<uint32_t>& r);
};

}  // namespace h4
