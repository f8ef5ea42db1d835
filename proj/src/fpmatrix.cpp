#include "h4/fpmatrix.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace h4 {

namespace {
long long mod_inverse(long long a, long long p) {
    long long t = 0, new_t = 1, r = p, new_r = a % p;
    while (new_r != 0) {
        long long q = r / new_r;
        long long tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1) throw std::domain_error("mod_inverse: not invertible");
    return ((t % p) + p) % p;
}
}  // namespace

FpMat::FpMat(long long p, int rows, int cols)
    : p_(p), rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {
    if (p < 2) throw std::invalid_argument("FpMat: p must be >= 2");
}

FpMat FpMat::identity(long long p, int n) {
    FpMat m(p, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

FpMat FpMat::from_rows(long long p, const std::vector<std::vector<long long>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    FpMat m(p, r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) throw std::invalid_argument("FpMat: ragged rows");
        for (int j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
}

void FpMat::set(int i, int j, long long v) {
    a_[static_cast<size_t>(i) * cols_ + j] = ((v % p_) + p_) % p_;
}

FpMat FpMat::mul(const FpMat& o) const {
    if (cols_ != o.rows_ || p_ != o.p_) throw std::invalid_argument("FpMat::mul: mismatch");
    FpMat r(p_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            long long v = at(i, k);
            if (!v) continue;
            for (int j = 0; j < o.cols_; ++j) {
                long long& dst = r.a_[static_cast<size_t>(i) * o.cols_ + j];
                dst = (dst + v * o.at(k, j)) % p_;
            }
        }
    return r;
}

FpMat FpMat::transpose() const {
    FpMat t(p_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.set(j, i, at(i, j));
    return t;
}

FpMat FpMat::pow(long long e) const {
    if (rows_ != cols_) throw std::invalid_argument("FpMat::pow: not square");
    FpMat base = *this, acc = identity(p_, rows_);
    while (e > 0) {
        if (e & 1) acc = acc.mul(base);
        base = base.mul(base);
        e >>= 1;
    }
    return acc;
}

bool FpMat::operator==(const FpMat& o) const {
    return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

bool FpMat::is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

namespace {
// returns (rref matrix, pivot columns)
std::pair<FpMat, std::vector<int>> rref(FpMat m) {
    long long p = m.p();
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int sel = -1;
        for (int i = r; i < m.rows(); ++i)
            if (m.at(i, c)) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != r)
            for (int j = 0; j < m.cols(); ++j) {
                long long t = m.at(r, j);
                m.set(r, j, m.at(sel, j));
                m.set(sel, j, t);
            }
        long long inv = mod_inverse(m.at(r, c), p);
        for (int j = 0; j < m.cols(); ++j) m.set(r, j, m.at(r, j) * inv % p);
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r) continue;
            long long f = m.at(i, c);
            if (!f) continue;
            for (int j = 0; j < m.cols(); ++j)
                m.set(i, j, m.at(i, j) - f * m.at(r, j) % p);
        }
        pivots.push_back(c);
        ++r;
    }
    return {m, pivots};
}
}  // namespace

int FpMat::rank() const { return static_cast<int>(rref(*this).second.size()); }

std::pair<FpMat, std::vector<int>> fp_rref(const FpMat& m) { return rref(m); }

bool fp_solve(const FpMat& K, const FpMat& B, FpMat& X) {
    if (K.rows() != B.rows() || K.p() != B.p()) throw std::invalid_argument("fp_solve: shape mismatch");
    int s = K.cols();
    FpMat aug(K.p(), K.rows(), s + B.cols());
    for (int i = 0; i < K.rows(); ++i) {
        for (int j = 0; j < s; ++j) aug.set(i, j, K.at(i, j));
        for (int j = 0; j < B.cols(); ++j) aug.set(i, s + j, B.at(i, j));
    }
    auto [red, pivots] = rref(aug);
    X = FpMat(K.p(), s, B.cols());
    for (size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] >= s) return false;  // inconsistent row
        for (int j = 0; j < B.cols(); ++j) X.set(pivots[r], j, red.at(static_cast<int>(r), s + j));
    }
    // full-column-rank K gives the unique solution; verify for safety
    FpMat check = K.mul(X);
    for (int i = 0; i < B.rows(); ++i)
        for (int j = 0; j < B.cols(); ++j)
            if (check.at(i, j) != B.at(i, j)) return false;
    return true;
}

FpMat complete_to_basis(const FpMat& sub) {
    int n = sub.rows(), s = sub.cols();
    FpMat acc = sub;
    std::vector<int> extra;
    for (int i = 0; i < n && acc.cols() < n; ++i) {
        FpMat trial(sub.p(), n, acc.cols() + 1);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < acc.cols(); ++c) trial.set(r, c, acc.at(r, c));
        trial.set(i, acc.cols(), 1);
        if (trial.rank() == trial.cols()) {
            acc = trial;
            extra.push_back(i);
        }
    }
    if (acc.cols() != n) throw std::invalid_argument("complete_to_basis: columns are not independent");
    (void)s;
    return acc;
}

FpMat FpMat::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("FpMat::inverse: not square");
    FpMat aug(p_, rows_, 2 * cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) aug.set(i, j, at(i, j));
        aug.set(i, cols_ + i, 1);
    }
    auto [red, pivots] = rref(aug);
    if (static_cast<int>(pivots.size()) != rows_ || pivots.back() >= cols_)
        throw std::domain_error("FpMat::inverse: singular");
    FpMat inv(p_, rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) inv.set(i, j, red.at(i, cols_ + j));
    return inv;
}

FpMat FpMat::kernel() const {
    auto [red, pivots] = rref(*this);
    std::vector<int> free_cols;
    {
        size_t pi = 0;
        for (int c = 0; c < cols_; ++c) {
            if (pi < pivots.size() && pivots[pi] == c)
                ++pi;
            else
                free_cols.push_back(c);
        }
    }
    FpMat k(p_, cols_, static_cast<int>(free_cols.size()));
    for (size_t f = 0; f < free_cols.size(); ++f) {
        int c = free_cols[f];
        k.set(c, static_cast<int>(f), 1);
        for (size_t pi = 0; pi < pivots.size(); ++pi) {
            long long v = red.at(static_cast<int>(pi), c);
            if (v) k.set(pivots[pi], static_cast<int>(f), p_ - v);
        }
    }
    return k;
}

FpMat FpMat::vstack(const std::vector<FpMat>& parts) {
    if (parts.empty()) return FpMat();
    int cols = parts[0].cols();
    long long p = parts[0].p();
    int rows = 0;
    for (const auto& m : parts) {
        if (m.cols() != cols || m.p() != p) throw std::invalid_argument("FpMat::vstack: mismatch");
        rows += m.rows();
    }
    FpMat out(p, rows, cols);
    int r = 0;
    for (const auto& m : parts) {
        for (int i = 0; i < m.rows(); ++i, ++r)
            for (int j = 0; j < cols; ++j) out.set(r, j, m.at(i, j));
    }
    return out;
}

std::vector<long long> FpMat::apply(const std::vector<long long>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("FpMat::apply: size");
    std::vector<long long> y(rows_, 0);
    for (int i = 0; i < rows_; ++i) {
        long long acc = 0;
        for (int j = 0; j < cols_; ++j) acc = (acc + at(i, j) * (x[j] % p_)) % p_;
        y[i] = ((acc % p_) + p_) % p_;
    }
    return y;
}

namespace {

// packed F_2 row
struct Row2 {
    std::vector<uint64_t> w;
    int lead = -1;
    explicit Row2(int cols) : w((cols + 63) / 64, 0) {}
    bool get(int j) const { return (w[j >> 6] >> (j & 63)) & 1; }
    void flip(int j) { w[j >> 6] ^= (1ULL << (j & 63)); }
    void xor_with(const Row2& o) {
        for (size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
    }
    void recompute_lead() {
        lead = -1;
        for (size_t i = 0; i < w.size(); ++i)
            if (w[i]) {
                lead = static_cast<int>(i * 64 + __builtin_ctzll(w[i]));
                return;
            }
    }
};

// packed F_3 row, planes lo (value 1) / hi (value 2)
struct Row3 {
    std::vector<uint64_t> lo, hi;
    int lead = -1;
    explicit Row3(int cols) : lo((cols + 63) / 64, 0), hi((cols + 63) / 64, 0) {}
    int get(int j) const {
        int w = j >> 6, b = j & 63;
        if ((lo[w] >> b) & 1) return 1;
        if ((hi[w] >> b) & 1) return 2;
        return 0;
    }
    void set(int j, int v) {
        int w = j >> 6, b = j & 63;
        lo[w] &= ~(1ULL << b);
        hi[w] &= ~(1ULL << b);
        if (v == 1) lo[w] |= (1ULL << b);
        if (v == 2) hi[w] |= (1ULL << b);
    }
    void add(const Row3& o) {  // this += o (mod 3), bit-sliced
        for (size_t i = 0; i < lo.size(); ++i) {
            uint64_t al = lo[i], ah = hi[i], bl = o.lo[i], bh = o.hi[i];
            uint64_t zl = (al & ~bl & ~bh) | (~al & ~ah & bl) | (ah & bh);
            uint64_t zh = (ah & ~bl & ~bh) | (~al & ~ah & bh) | (al & bl);
            lo[i] = zl;
            hi[i] = zh;
        }
    }
    void negate() { std::swap(lo, hi); }
    void recompute_lead() {
        lead = -1;
        for (size_t i = 0; i < lo.size(); ++i) {
            uint64_t any = lo[i] | hi[i];
            if (any) {
                lead = static_cast<int>(i * 64 + __builtin_ctzll(any));
                return;
            }
        }
    }
};

}  // namespace

long long sparse_rank_mod_p(int rows, int cols, const std::vector<Triple>& entries,
                            long long p, long long target) {
    if (p != 2 && p != 3) throw std::invalid_argument("sparse_rank_mod_p: p must be 2 or 3");
    // bucket entries by row
    std::vector<std::vector<std::pair<int, int>>> by_row(rows);
    for (const auto& t : entries) {
        long long v = ((t.val % p) + p) % p;
        if (v) by_row[t.row].push_back({t.col, static_cast<int>(v)});
    }

    long long rank = 0;
    if (p == 2) {
        std::vector<std::unique_ptr<Row2>> pivot(cols);
        for (int i = 0; i < rows; ++i) {
            if (by_row[i].empty()) continue;
            Row2 r(cols);
            for (auto [c, v] : by_row[i]) r.flip(c);  // duplicate cols already merged mod 2 upstream
            r.recompute_lead();
            while (r.lead >= 0 && pivot[r.lead]) {
                r.xor_with(*pivot[r.lead]);
                r.recompute_lead();
            }
            if (r.lead >= 0) {
                int l = r.lead;
                pivot[l] = std::make_unique<Row2>(std::move(r));
                ++rank;
                if (target >= 0 && rank >= target) return rank;
            }
        }
    } else {
        std::vector<std::unique_ptr<Row3>> pivot(cols);
        std::vector<int> pivot_lead_val(cols, 0);
        for (int i = 0; i < rows; ++i) {
            if (by_row[i].empty()) continue;
            Row3 r(cols);
            for (auto [c, v] : by_row[i]) {
                int cur = (r.get(c) + v) % 3;
                r.set(c, cur);
            }
            r.recompute_lead();
            while (r.lead >= 0 && pivot[r.lead]) {
                // pivot rows are normalized to lead value 1; subtract the right multiple
                int lv = r.get(r.lead);
                Row3 tmp = *pivot[r.lead];
                if (lv == 1) tmp.negate();  // r += -pivot
                // lv == 2: r += pivot (since 2 + 1 = 0 mod 3)
                r.add(tmp);
                r.recompute_lead();
            }
            if (r.lead >= 0) {
                if (r.get(r.lead) == 2) r.negate();  // normalize lead to 1
                int l = r.lead;
                pivot[l] = std::make_unique<Row3>(std::move(r));
                ++rank;
                if (target >= 0 && rank >= target) return rank;
            }
        }
    }
    return rank;
}

}  // namespace h4
