#pragma once

#include <map>
#include <string>
#include <vector>

#include "h4/bigint.hpp"

namespace h4 {

/**
 * Eigenvalue data of a group element acting on a representation: for an
 * element of order n, the multiplicity of the eigenvalue zeta_n^j for each
 * j in Z/n. This is the whole input to the characteristic-class calculus
 * on cyclic subgroups.
 */
struct Spectrum {
    long long modulus = 1;                    // n = order of the element
    std::map<long long, long long> mult;      // exponent -> multiplicity (> 0)

    long long degree() const;
    long long at(long long j) const;          // multiplicity, 0 if absent
    bool real_symmetric() const;              // m_j == m_{-j} for all j
    Spectrum conjugate() const;
    Spectrum united(const Spectrum& o) const; // disjoint union (same modulus)
    std::string to_string() const;            // e.g. "1^25 (-1)^30 i^25 (-i)^25" style exponent map
};

/// Element of H^4 of a cyclic group of order n: the coefficient of t^2 where
/// t is the first Chern class of the defining character g -> exp(2*pi*i/n).
struct H4Class {
    long long modulus = 1;
    long long value = 0;  // reduced mod modulus

    long long order() const;  // n / gcd(n, value)
};

/// Degree <= 4 Chern data of a (virtual) representation restricted to a
/// cyclic subgroup: c1 and c2 as coefficients of t and t^2.
struct ChernPair {
    long long modulus = 1;
    long long c1 = 0;
    long long c2 = 0;
};

/**
 * c1 and c2 of a representation restricted to a cyclic subgroup, from its
 * eigenvalue spectrum:
 *   c1 = sum_k m_k,   c2 = e_2(multiset of exponents)  (mod n),
 * the elementary symmetric value computed by exact integer arithmetic as
 * ((sum)^2 - sum of squares)/2 before reduction.
 */
ChernPair chern_restriction(const Spectrum& s);

/// Whitney sum c2(V + W) = c2(V) + c2(W) + c1(V) c1(W), folded left to right.
ChernPair whitney_c2(const std::vector<ChernPair>& parts);

/**
 * First Pontryagin class of the underlying real representation, restricted to
 * a cyclic subgroup. Requires a real-symmetric spectrum; rotation 2-planes
 * {j, -j} contribute j^2 each, (-1)-eigenplanes contribute (n/2)^2 per pair,
 * and the fixed subspace contributes nothing.
 */
H4Class p1_restriction(const Spectrum& s);

/// Per-rotation-value lift audit backing a half-Pontryagin evaluation.
struct SpinLiftCertificate {
    struct ClassAudit {
        long long rotation = 0;      // scaled rotation number mod lift order
        long long planes = 0;        // how many 2-planes carry it
        std::vector<long long> lift_squares_mod_2n;  // distinct c^2 mod 2*lift
        bool both_parities = false;
    };
    std::vector<ClassAudit> classes;
    bool parity_adjusted = false;    // an odd-conductor lift parity fix was used
};

struct HalfPontryagin {
    H4Class value;
    SpinLiftCertificate certificate;
};

/**
 * Fractional Pontryagin class p1/2 restricted to a cyclic subgroup, evaluated
 * on the order-`lift_order` preimage in the spin cover (lift_order is n or 2n).
 *
 * Enumerates integer weight lifts c_i of the rotation numbers modulo the lift
 * order, subject to the spin condition sum c_i = 0 mod 2, returns
 * (sum c_i^2)/2 mod lift_order, and certifies that every admissible lift
 * yields the same value. Throws when no admissible lift exists (the cyclic
 * subgroup has no spin structure at this lift order).
 */
HalfPontryagin phalf_restriction(const Spectrum& s, long long lift_order);

/// Generators of H^4(Z/n) split into cup-squares of generators of H^2 and the
/// rest; for n dividing 24 the square set is exactly {1}.
struct CupSquarePartition {
    std::vector<long long> squares;
    std::vector<long long> non_squares;
};
CupSquarePartition cup_square_generators(long long n);

/// c2 of the n-th symmetric power of the defining SU(2) representation, as a
/// multiple of c2 of the defining representation: 0, 1, 4, 10, 20, 35, ...
long long su2_symmetric_power_c2(int n);

}  // namespace h4
