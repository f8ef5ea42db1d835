#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "h4/bigint.hpp"

namespace h4 {

/**
 * Exact cyclotomic integer: a formal Z-combination of n-th roots of unity,
 * reduced modulo the n-th cyclotomic polynomial.
 *
 * The canonical form is the remainder of sum a_k x^k modulo Phi_n(x), so two
 * values are equal iff their coefficient vectors agree; in particular the
 * rational-integer test is "all coefficients above degree 0 vanish".  The
 * conductor is part of the value and is never changed by canonicalization;
 * arithmetic between different conductors lifts both operands to the lcm.
 */
class CycInt {
public:
    CycInt() : n_(1), coeff_(1) {}
    explicit CycInt(BigInt integer) : n_(1), coeff_{std::move(integer)} {}

    /// coefficient * zeta_n^exponent
    static CycInt root_of_unity(long long n, long long exponent, BigInt coefficient = BigInt(1));
    /// Sum of [conductor, exponent, coefficient] terms.
    static CycInt from_terms(const std::vector<std::array<long long, 3>>& terms);

    long long conductor() const { return n_; }

    CycInt canonical() const;  // returns *this reduced (idempotent)

    bool is_zero() const;
    /// True iff the value is a rational integer; *out receives it when non-null.
    bool is_rational_integer(BigInt* out = nullptr) const;

    CycInt operator+(const CycInt& o) const;
    CycInt operator-(const CycInt& o) const;
    CycInt operator*(const CycInt& o) const;
    CycInt operator-() const;

    /// Galois twist zeta -> zeta^k for k coprime to the conductor;
    /// k = -1 is complex conjugation.
    CycInt galois(long long k) const;
    CycInt conjugate() const { return galois(-1); }

    /// Lift to a conductor m with n | m.
    CycInt lift(long long m) const;

    bool operator==(const CycInt& o) const;
    bool operator!=(const CycInt& o) const { return !(*this == o); }

    /// Terms of the canonical form as [conductor, exponent, coefficient].
    std::vector<std::array<long long, 3>> terms() const;

    std::string to_string() const;

private:
    long long n_;                 // conductor
    std::vector<BigInt> coeff_;   // size n_, canonical entries vanish at degree >= phi(n)

    CycInt(long long n, std::vector<BigInt> c) : n_(n), coeff_(std::move(c)) {}
    void reduce();
};

/// Coefficients of the n-th cyclotomic polynomial (ascending degree).
std::vector<BigInt> cyclotomic_polynomial(long long n);

long long euler_phi(long long n);

}  // namespace h4
