#include "h4/abelian.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace h4 {

std::vector<std::pair<long long, int>> factorize(long long n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
    std::vector<std::pair<long long, int>> out;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.push_back({p, e});
        }
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

AbelianGroup AbelianGroup::from_orders(const std::vector<long long>& orders) {
    AbelianGroup g;
    // collect p-power parts of each cyclic factor
    std::map<long long, std::vector<int>> by_prime;  // p -> exponents, one per factor
    for (long long d : orders) {
        if (d < 0) throw std::invalid_argument("AbelianGroup: negative order");
        if (d == 0) {
            g.free_rank_++;
            continue;
        }
        for (auto [p, e] : factorize(d)) by_prime[p].push_back(e);
    }
    for (auto& [p, es] : by_prime) std::sort(es.begin(), es.end(), std::greater<int>());
    // j-th invariant factor (largest first) = prod over p of p^(j-th largest exponent)
    size_t k = 0;
    for (auto& [p, es] : by_prime) k = std::max(k, es.size());
    std::vector<long long> inv;
    for (size_t j = 0; j < k; ++j) {
        long long d = 1;
        for (auto& [p, es] : by_prime) {
            if (j < es.size()) {
                for (int i = 0; i < es[j]; ++i) d *= p;
            }
        }
        if (d > 1) inv.push_back(d);
    }
    std::reverse(inv.begin(), inv.end());
    g.factors_ = inv;
    return g;
}

AbelianGroup AbelianGroup::cyclic(long long n) { return from_orders({n}); }

BigInt AbelianGroup::order() const {
    if (free_rank_ != 0) throw std::domain_error("AbelianGroup::order: infinite group");
    BigInt o(1);
    for (long long d : factors_) o *= BigInt(d);
    return o;
}

long long AbelianGroup::exponent() const {
    if (free_rank_ != 0) throw std::domain_error("AbelianGroup::exponent: infinite group");
    return factors_.empty() ? 1 : factors_.back();
}

AbelianGroup AbelianGroup::primary_part(long long p) const {
    if (free_rank_ != 0) throw std::domain_error("AbelianGroup::primary_part: free rank > 0");
    std::vector<long long> parts;
    for (long long d : factors_) {
        long long q = 1;
        while (d % p == 0) {
            d /= p;
            q *= p;
        }
        if (q > 1) parts.push_back(q);
    }
    return from_orders(parts);
}

std::vector<long long> AbelianGroup::primes() const {
    std::vector<long long> ps;
    for (long long d : factors_)
        for (auto [p, e] : factorize(d))
            if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
    std::sort(ps.begin(), ps.end());
    return ps;
}

AbelianGroup AbelianGroup::direct_sum(const AbelianGroup& o) const {
    std::vector<long long> all = factors_;
    all.insert(all.end(), o.factors_.begin(), o.factors_.end());
    AbelianGroup g = from_orders(all);
    g.free_rank_ = free_rank_ + o.free_rank_;
    return g;
}

std::vector<long long> prime_power_multiset(const AbelianGroup& g) {
    std::vector<long long> out;
    for (long long d : g.invariant_factors()) {
        for (auto [p, e] : factorize(d)) {
            long long q = 1;
            for (int i = 0; i < e; ++i) q *= p;
            out.push_back(q);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool AbelianGroup::is_summand_of(const AbelianGroup& g) const {
    if (free_rank_ > g.free_rank_) return false;
    // Krull-Schmidt: cyclic p-power summands of g are exactly sub-multisets.
    std::vector<long long> a = prime_power_multiset(*this);
    std::vector<long long> b = prime_power_multiset(g);
    size_t j = 0;
    for (long long q : a) {
        while (j < b.size() && b[j] < q) ++j;
        if (j >= b.size() || b[j] != q) return false;
        ++j;
    }
    return true;
}

std::string AbelianGroup::to_string() const {
    if (is_trivial()) return "1";
    // group equal prime-power... keep invariant-factor print, compressing runs:
    // (2,2,2,8) -> "2^3 x 8"
    std::ostringstream os;
    bool first = true;
    size_t i = 0;
    while (i < factors_.size()) {
        size_t j = i;
        while (j < factors_.size() && factors_[j] == factors_[i]) ++j;
        if (!first) os << " x ";
        os << factors_[i];
        if (j - i > 1) os << "^" << (j - i);
        first = false;
        i = j;
    }
    if (free_rank_ > 0) {
        if (!first) os << " x ";
        os << "Z";
        if (free_rank_ > 1) os << "^" << free_rank_;
    }
    return os.str();
}

}  // namespace h4
