#include "h4/charclass.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "h4/errors.hpp"

namespace h4 {

namespace {
long long mod_reduce(const BigInt& v, long long n) { return v.mod_euclid(BigInt(n)).to_int64(); }
long long gcd_ll(long long a, long long b) { return std::gcd(std::abs(a), std::abs(b)); }
}  // namespace

long long Spectrum::degree() const {
    long long d = 0;
    for (auto& [j, m] : mult) d += m;
    return d;
}

long long Spectrum::at(long long j) const {
    auto it = mult.find(((j % modulus) + modulus) % modulus);
    return it == mult.end() ? 0 : it->second;
}

bool Spectrum::real_symmetric() const {
    for (auto& [j, m] : mult)
        if (at(modulus - j) != m) return false;
    return true;
}

Spectrum Spectrum::conjugate() const {
    Spectrum c;
    c.modulus = modulus;
    for (auto& [j, m] : mult) c.mult[(modulus - j) % modulus] += m;
    return c;
}

Spectrum Spectrum::united(const Spectrum& o) const {
    if (modulus != o.modulus) throw ValidationError("Spectrum::united: modulus mismatch");
    Spectrum u = *this;
    for (auto& [j, m] : o.mult) u.mult[j] += m;
    return u;
}

std::string Spectrum::to_string() const {
    std::ostringstream os;
    os << "mod " << modulus << ":";
    for (auto& [j, m] : mult) os << " " << j << "^" << m;
    return os.str();
}

long long H4Class::order() const {
    if (value == 0) return 1;
    return modulus / gcd_ll(modulus, value);
}

ChernPair chern_restriction(const Spectrum& s) {
    BigInt sum(0), sum_sq(0);
    for (auto& [j, m] : s.mult) {
        sum += BigInt(j) * BigInt(m);
        sum_sq += BigInt(j) * BigInt(j) * BigInt(m);
    }
    BigInt e2 = (sum * sum - sum_sq) / BigInt(2);
    ChernPair cp;
    cp.modulus = s.modulus;
    cp.c1 = mod_reduce(sum, s.modulus);
    cp.c2 = mod_reduce(e2, s.modulus);
    return cp;
}

ChernPair whitney_c2(const std::vector<ChernPair>& parts) {
    if (parts.empty()) return ChernPair{};
    ChernPair acc = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) {
        const ChernPair& p = parts[i];
        if (p.modulus != acc.modulus) throw ValidationError("whitney_c2: modulus mismatch");
        long long n = acc.modulus;
        ChernPair next;
        next.modulus = n;
        next.c2 = mod_reduce(BigInt(acc.c2) + BigInt(p.c2) + BigInt(acc.c1) * BigInt(p.c1), n);
        next.c1 = mod_reduce(BigInt(acc.c1) + BigInt(p.c1), n);
        acc = next;
    }
    return acc;
}

namespace {

// rotation numbers of the underlying real representation, one per 2-plane,
// in 0..n/2; the odd fixed line (if any) is dropped
std::vector<long long> rotation_planes(const Spectrum& s) {
    if (!s.real_symmetric())
        throw ValidationError("spectrum is not real-symmetric: not a real representation on this subgroup");
    long long n = s.modulus;
    std::vector<long long> rot;
    for (auto& [j, m] : s.mult) {
        if (j == 0) {
            for (long long k = 0; k < m / 2; ++k) rot.push_back(0);
            // odd fixed line contributes nothing
        } else if (2 * j == n) {
            if (m % 2)
                throw ValidationError(
                    "eigenvalue -1 multiplicity is odd: the real representation has determinant -1 on this subgroup");
            for (long long k = 0; k < m / 2; ++k) rot.push_back(n / 2);
        } else if (2 * j < n) {
            for (long long k = 0; k < m; ++k) rot.push_back(j);
        }
    }
    return rot;
}

}  // namespace

H4Class p1_restriction(const Spectrum& s) {
    std::vector<long long> rot = rotation_planes(s);
    BigInt total(0);
    for (long long r : rot) total += BigInt(r) * BigInt(r);
    H4Class h;
    h.modulus = s.modulus;
    h.value = mod_reduce(total, s.modulus);
    return h;
}

HalfPontryagin phalf_restriction(const Spectrum& s, long long lift_order) {
    long long n = s.modulus;
    if (lift_order != n && lift_order != 2 * n)
        throw ValidationError("phalf_restriction: lift order must be n or 2n");
    long long scale = lift_order / n;
    long long nn = lift_order;

    std::vector<long long> rot = rotation_planes(s);
    // rotation numbers as seen by the order-nn lift
    std::map<long long, long long> planes;  // scaled rotation -> count
    for (long long r : rot) planes[(r * scale) % nn]++;

    HalfPontryagin out;
    out.value.modulus = nn;

    // Lift candidates per rotation value r: {r, r-nn, -r, nn-r} within [-nn, nn].
    // For even nn every candidate has the parity of r; for odd nn both parities
    // occur and the squares mod 2nn differ by exactly nn between parities.
    BigInt sum_sq(0);
    long long parity_sum = 0;
    for (auto& [r, count] : planes) {
        std::set<long long> lifts = {r, r - nn, -r, nn - r};
        std::set<long long> sq_even, sq_odd;
        for (long long c : lifts) {
            long long sq = static_cast<long long>((BigInt(c) * BigInt(c)).mod_euclid(BigInt(2 * nn)).to_int64());
            (std::abs(c) % 2 == 0 ? sq_even : sq_odd).insert(sq);
        }
        if (sq_even.size() > 1 || sq_odd.size() > 1)
            throw ContradictionError("phalf_restriction: admissible lifts disagree (input is not a spin restriction)");
        if (!sq_even.empty() && !sq_odd.empty()) {
            long long d = ((*sq_odd.begin() - *sq_even.begin()) % (2 * nn) + 2 * nn) % (2 * nn);
            if (d != nn && d != 0)
                throw ContradictionError("phalf_restriction: parity classes of lifts disagree by an unexpected amount");
        }
        SpinLiftCertificate::ClassAudit audit;
        audit.rotation = r;
        audit.planes = count;
        for (long long v : sq_even) audit.lift_squares_mod_2n.push_back(v);
        for (long long v : sq_odd) audit.lift_squares_mod_2n.push_back(v);
        audit.both_parities = !sq_even.empty() && !sq_odd.empty();
        out.certificate.classes.push_back(audit);

        sum_sq += BigInt(r) * BigInt(r) * BigInt(count);
        parity_sum += (r % 2) * count;
    }

    if (parity_sum % 2 != 0) {
        if (nn % 2 == 0)
            throw ValidationError(
                "phalf_restriction: no admissible lift (no spin structure on this cyclic subgroup at this lift order)");
        // odd lift order: shift one plane's weight by nn to fix the parity
        if (planes.empty()) throw InternalError("phalf_restriction: parity defect without planes");
        long long r = planes.begin()->first;
        sum_sq += BigInt(r - nn) * BigInt(r - nn) - BigInt(r) * BigInt(r);
        out.certificate.parity_adjusted = true;
    }

    if (!(sum_sq % BigInt(2)).is_zero())
        throw InternalError("phalf_restriction: weight square sum is odd despite even weight sum");
    out.value.value = mod_reduce(sum_sq / BigInt(2), nn);
    return out;
}

CupSquarePartition cup_square_generators(long long n) {
    if (n < 2) throw ValidationError("cup_square_generators: n must be >= 2");
    std::set<long long> units, squares;
    for (long long k = 1; k < n; ++k)
        if (gcd_ll(k, n) == 1) {
            units.insert(k);
            squares.insert(k * k % n);
        }
    CupSquarePartition part;
    for (long long u : units) {
        if (squares.count(u))
            part.squares.push_back(u);
        else
            part.non_squares.push_back(u);
    }
    return part;
}

long long su2_symmetric_power_c2(int n) {
    if (n < 0) throw ValidationError("su2_symmetric_power_c2: n must be >= 0");
    // weights n, n-2, ..., -n; c2 = -e2(weights) = (sum of squares)/2 in units
    // of c2 of the defining representation
    long long sum_sq = 0;
    for (int k = 0; k <= n; ++k) {
        long long w = n - 2 * k;
        sum_sq += w * w;
    }
    return sum_sq / 2;
}

}  // namespace h4
