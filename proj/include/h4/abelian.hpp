#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "h4/bigint.hpp"

namespace h4 {

/// Finitely generated abelian group in invariant-factor form:
/// Z/d1 + Z/d2 + ... + Z/dk + Z^free_rank with d1 | d2 | ... | dk, each di >= 2.
/// Unit factors are dropped; the trivial group has no factors and prints as "1".
class AbelianGroup {
public:
    AbelianGroup() = default;

    /// Normalizes an arbitrary list of cyclic orders (>= 0; 0 means a free Z
    /// summand, 1 summands are dropped) into invariant-factor form.
    static AbelianGroup from_orders(const std::vector<long long>& orders);
    static AbelianGroup cyclic(long long n);
    static AbelianGroup trivial() { return AbelianGroup(); }

    const std::vector<long long>& invariant_factors() const { return factors_; }
    int free_rank() const { return free_rank_; }

    bool is_trivial() const { return factors_.empty() && free_rank_ == 0; }
    bool is_finite() const { return free_rank_ == 0; }
    bool is_cyclic() const { return free_rank_ == 0 && factors_.size() <= 1; }

    /// Order as a BigInt; throws for infinite groups.
    BigInt order() const;
    /// Largest invariant factor (1 for the trivial group); throws if infinite.
    long long exponent() const;

    /// The p-Sylow subgroup. Requires free_rank == 0.
    AbelianGroup primary_part(long long p) const;
    /// Primes dividing the order.
    std::vector<long long> primes() const;

    AbelianGroup direct_sum(const AbelianGroup& o) const;

    /// True iff this is a direct summand of g (for finite groups: the
    /// prime-power multiset of this is contained in that of g).
    bool is_summand_of(const AbelianGroup& g) const;

    /// Table notation: "1", "8", "2 x 8", "2^9 x 8", "Z^2", "2 x Z".
    std::string to_string() const;

    bool operator==(const AbelianGroup& o) const {
        return factors_ == o.factors_ && free_rank_ == o.free_rank_;
    }
    bool operator!=(const AbelianGroup& o) const { return !(*this == o); }

private:
    std::vector<long long> factors_;
    int free_rank_ = 0;
};

/// Prime factorization n = prod p^e as (p, e) pairs, p ascending. n >= 1.
std::vector<std::pair<long long, int>> factorize(long long n);

/// prime-power multiset (each entry p^e of a cyclic factor) of a finite group.
std::vector<long long> prime_power_multiset(const AbelianGroup& g);

}  // namespace h4
