#include "h4/cyclotomic.hpp"

#include <array>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "h4/abelian.hpp"

namespace h4 {

long long euler_phi(long long n) {
    long long r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

namespace {

// exact division of integer polynomials, remainder must vanish
std::vector<BigInt> poly_div_exact(std::vector<BigInt> num, const std::vector<BigInt>& den) {
    if (den.empty() || den.back().is_zero()) throw std::invalid_argument("poly_div_exact: bad divisor");
    if (num.size() < den.size()) {
        for (const BigInt& c : num)
            if (!c.is_zero()) throw std::logic_error("poly_div_exact: nonzero remainder");
        return {};
    }
    size_t qsize = num.size() - den.size() + 1;
    std::vector<BigInt> q(qsize);
    for (size_t qi = qsize; qi-- > 0;) {
        size_t i = qi + den.size() - 1;
        if (num[i].is_zero()) continue;
        if (!(num[i] % den.back()).is_zero()) throw std::logic_error("poly_div_exact: not divisible");
        BigInt c = num[i] / den.back();
        q[qi] = c;
        for (size_t k = 0; k < den.size(); ++k) num[qi + k] -= c * den[k];
    }
    for (const BigInt& c : num)
        if (!c.is_zero()) throw std::logic_error("poly_div_exact: nonzero remainder");
    return q;
}

}  // namespace

std::vector<BigInt> cyclotomic_polynomial(long long n) {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, computed recursively.
    static std::mutex mtx;
    static std::map<long long, std::vector<BigInt>> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }

    std::vector<BigInt> acc(n + 1);
    acc[0] = BigInt(-1);
    acc[n] = BigInt(1);
    for (long long d = 1; d < n; ++d) {
        if (n % d) continue;
        acc = poly_div_exact(acc, cyclotomic_polynomial(d));
    }
    std::lock_guard<std::mutex> lock(mtx);
    cache[n] = acc;
    return acc;
}

void CycInt::reduce() {
    const std::vector<BigInt> phi = cyclotomic_polynomial(n_);
    size_t deg = phi.size() - 1;  // = euler_phi(n_)
    // long-division remainder: eliminate from the top using monic phi
    for (size_t i = coeff_.size(); i-- > deg;) {
        BigInt c = coeff_[i];
        if (c.is_zero()) continue;
        coeff_[i] = BigInt();
        for (size_t k = 0; k < deg; ++k) coeff_[i - deg + k] -= c * phi[k];
        if (i == deg) break;
    }
}

CycInt CycInt::root_of_unity(long long n, long long exponent, BigInt coefficient) {
    if (n < 1) throw std::invalid_argument("CycInt: conductor must be positive");
    std::vector<BigInt> c(n);
    long long e = ((exponent % n) + n) % n;
    c[e] = std::move(coefficient);
    CycInt z(n, std::move(c));
    z.reduce();
    return z;
}

CycInt CycInt::from_terms(const std::vector<std::array<long long, 3>>& terms) {
    CycInt acc;
    for (const auto& t : terms) acc = acc + root_of_unity(t[0], t[1], BigInt(t[2]));
    return acc;
}

CycInt CycInt::canonical() const {
    CycInt c = *this;
    c.reduce();
    return c;
}

bool CycInt::is_zero() const {
    for (const BigInt& c : coeff_)
        if (!c.is_zero()) return false;
    return true;
}

bool CycInt::is_rational_integer(BigInt* out) const {
    for (size_t i = 1; i < coeff_.size(); ++i)
        if (!coeff_[i].is_zero()) return false;
    if (out) *out = coeff_.empty() ? BigInt() : coeff_[0];
    return true;
}

CycInt CycInt::lift(long long m) const {
    if (m % n_) throw std::invalid_argument("CycInt::lift: conductor must divide target");
    long long s = m / n_;
    std::vector<BigInt> c(m);
    for (long long i = 0; i < n_; ++i)
        if (!coeff_[i].is_zero()) c[i * s] += coeff_[i];
    CycInt z(m, std::move(c));
    z.reduce();
    return z;
}

CycInt CycInt::operator+(const CycInt& o) const {
    long long m = BigInt::lcm(BigInt(n_), BigInt(o.n_)).to_int64();
    CycInt a = lift(m), b = o.lift(m);
    for (long long i = 0; i < m; ++i) a.coeff_[i] += b.coeff_[i];
    a.reduce();
    return a;
}

CycInt CycInt::operator-(const CycInt& o) const { return *this + (-o); }

CycInt CycInt::operator-() const {
    CycInt r = *this;
    for (BigInt& c : r.coeff_) c = -c;
    return r;
}

CycInt CycInt::operator*(const CycInt& o) const {
    long long m = BigInt::lcm(BigInt(n_), BigInt(o.n_)).to_int64();
    CycInt a = lift(m), b = o.lift(m);
    std::vector<BigInt> prod(m);
    for (long long i = 0; i < m; ++i) {
        if (a.coeff_[i].is_zero()) continue;
        for (long long j = 0; j < m; ++j) {
            if (b.coeff_[j].is_zero()) continue;
            prod[(i + j) % m] += a.coeff_[i] * b.coeff_[j];
        }
    }
    CycInt r(m, std::move(prod));
    r.reduce();
    return r;
}

CycInt CycInt::galois(long long k) const {
    long long kk = ((k % n_) + n_) % n_;
    if (BigInt::gcd(BigInt(kk == 0 ? n_ : kk), BigInt(n_)).to_int64() != 1 && n_ > 1)
        throw std::invalid_argument("CycInt::galois: exponent not coprime to conductor");
    std::vector<BigInt> c(n_);
    for (long long i = 0; i < n_; ++i)
        if (!coeff_[i].is_zero()) c[(i * kk) % n_] += coeff_[i];
    CycInt z(n_, std::move(c));
    z.reduce();
    return z;
}

bool CycInt::operator==(const CycInt& o) const {
    long long m = BigInt::lcm(BigInt(n_), BigInt(o.n_)).to_int64();
    CycInt a = lift(m), b = o.lift(m);
    return a.coeff_ == b.coeff_;
}

std::vector<std::array<long long, 3>> CycInt::terms() const {
    std::vector<std::array<long long, 3>> out;
    for (long long i = 0; i < n_; ++i)
        if (!coeff_[i].is_zero()) out.push_back({n_, i, coeff_[i].to_int64()});
    return out;
}

std::string CycInt::to_string() const {
    BigInt v;
    if (is_rational_integer(&v)) return v.to_string();
    std::ostringstream os;
    bool first = true;
    for (long long i = 0; i < n_; ++i) {
        if (coeff_[i].is_zero()) continue;
        if (!first) os << (coeff_[i].is_neg() ? " - " : " + ");
        else if (coeff_[i].is_neg())
            os << "-";
        BigInt a = coeff_[i].abs();
        if (i == 0)
            os << a.to_string();
        else {
            if (!a.is_one()) os << a.to_string() << "*";
            os << "z" << n_;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

}  // namespace h4
