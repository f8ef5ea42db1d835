#include "h4/intmatrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace h4 {

namespace {
const BigInt kZero;
}

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, BigInt(1));
    return m;
}

IntMat IntMat::from_triples(int rows, int cols, const std::vector<Triple>& ts) {
    IntMat m(rows, cols);
    for (const auto& t : ts) m.add_to(t.row, t.col, BigInt(t.val));
    return m;
}

IntMat IntMat::diagonal(const std::vector<long long>& d) {
    IntMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m.set(static_cast<int>(i), static_cast<int>(i), BigInt(d[i]));
    return m;
}

const BigInt& IntMat::at(int i, int j) const {
    auto it = row_[i].find(j);
    return it == row_[i].end() ? kZero : it->second;
}

void IntMat::set(int i, int j, BigInt v) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw std::out_of_range("IntMat::set");
    if (v.is_zero())
        row_[i].erase(j);
    else
        row_[i][j] = std::move(v);
}

void IntMat::add_to(int i, int j, const BigInt& v) {
    if (v.is_zero()) return;
    auto it = row_[i].find(j);
    if (it == row_[i].end()) {
        row_[i][j] = v;
    } else {
        it->second += v;
        if (it->second.is_zero()) row_[i].erase(it);
    }
}

long long IntMat::nnz() const {
    long long n = 0;
    for (const auto& r : row_) n += static_cast<long long>(r.size());
    return n;
}

bool IntMat::is_zero() const {
    for (const auto& r : row_)
        if (!r.empty()) return false;
    return true;
}

IntMat IntMat::transpose() const {
    IntMat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : row_[i]) t.row_[j][i] = v;
    return t;
}

IntMat IntMat::mul(const IntMat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("IntMat::mul: shape mismatch");
    IntMat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i) {
        std::map<int, BigInt> acc;
        for (const auto& [j, v] : row_[i]) {
            for (const auto& [k, w] : o.row_[j]) {
                auto it = acc.find(k);
                if (it == acc.end())
                    acc[k] = v * w;
                else
                    it->second += v * w;
            }
        }
        for (auto& [k, v] : acc)
            if (!v.is_zero()) r.row_[i][k] = std::move(v);
    }
    return r;
}

std::vector<BigInt> IntMat::apply(const std::vector<BigInt>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("IntMat::apply: size mismatch");
    std::vector<BigInt> y(rows_);
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : row_[i]) y[i] += v * x[j];
    return y;
}

bool IntMat::operator==(const IntMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && row_ == o.row_;
}

void IntMat::swap_rows(int i, int k) {
    if (i != k) std::swap(row_[i], row_[k]);
}

void IntMat::swap_cols(int j, int k) {
    if (j == k) return;
    for (auto& r : row_) {
        auto it_j = r.find(j), it_k = r.find(k);
        bool has_j = it_j != r.end(), has_k = it_k != r.end();
        if (!has_j && !has_k) continue;
        if (has_j && has_k) {
            std::swap(it_j->second, it_k->second);
        } else if (has_j) {
            r[k] = std::move(it_j->second);
            r.erase(j);
        } else {
            r[j] = std::move(it_k->second);
            r.erase(k);
        }
    }
}

void IntMat::negate_row(int i) {
    for (auto& [j, v] : row_[i]) v = -v;
}

void IntMat::negate_col(int j) {
    for (auto& r : row_) {
        auto it = r.find(j);
        if (it != r.end()) it->second = -it->second;
    }
}

void IntMat::row_axpy(int dst, int src, const BigInt& c) {
    if (c.is_zero() || dst == src) return;
    for (const auto& [j, v] : row_[src]) add_to(dst, j, c * v);
}

void IntMat::col_axpy(int dst, int src, const BigInt& c) {
    if (c.is_zero() || dst == src) return;
    for (int i = 0; i < rows_; ++i) {
        auto it = row_[i].find(src);
        if (it != row_[i].end()) {
            BigInt delta = c * it->second;
            add_to(i, dst, delta);
        }
    }
}

namespace {

// Elimination working copy with column occupancy index so pivot search and
// column updates do not scan every row.
struct Work {
    int rows, cols;
    std::vector<std::map<int, BigInt>> row;
    std::vector<std::set<int>> col_rows;

    explicit Work(const IntMat& m) : rows(m.rows()), cols(m.cols()), row(m.rows()), col_rows(m.cols()) {
        for (int i = 0; i < rows; ++i)
            for (const auto& [j, v] : m.row(i)) {
                row[i][j] = v;
                col_rows[j].insert(i);
            }
    }

    const BigInt* find(int i, int j) const {
        auto it = row[i].find(j);
        return it == row[i].end() ? nullptr : &it->second;
    }

    void set(int i, int j, BigInt v) {
        if (v.is_zero()) {
            if (row[i].erase(j)) col_rows[j].erase(i);
        } else {
            if (row[i].find(j) == row[i].end()) col_rows[j].insert(i);
            row[i][j] = std::move(v);
        }
    }

    void add_to(int i, int j, const BigInt& v) {
        if (v.is_zero()) return;
        auto it = row[i].find(j);
        if (it == row[i].end()) {
            row[i][j] = v;
            col_rows[j].insert(i);
        } else {
            it->second += v;
            if (it->second.is_zero()) {
                row[i].erase(it);
                col_rows[j].erase(i);
            }
        }
    }

    void swap_rows(int a, int b) {
        if (a == b) return;
        std::vector<int> cols_a, cols_b;
        for (auto& [j, v] : row[a]) cols_a.push_back(j);
        for (auto& [j, v] : row[b]) cols_b.push_back(j);
        for (int j : cols_a) col_rows[j].erase(a);
        for (int j : cols_b) col_rows[j].erase(b);
        std::swap(row[a], row[b]);
        for (auto& [j, v] : row[a]) col_rows[j].insert(a);
        for (auto& [j, v] : row[b]) col_rows[j].insert(b);
    }

    void swap_cols(int a, int b) {
        if (a == b) return;
        std::set<int> union_rows = col_rows[a];
        union_rows.insert(col_rows[b].begin(), col_rows[b].end());
        for (int i : union_rows) {
            auto it_a = row[i].find(a);
            auto it_b = row[i].find(b);
            BigInt va = it_a == row[i].end() ? BigInt() : it_a->second;
            BigInt vb = it_b == row[i].end() ? BigInt() : it_b->second;
            if (it_a != row[i].end()) row[i].erase(it_a);
            if (it_b != row[i].end()) row[i].erase(it_b);
            if (!vb.is_zero()) row[i][a] = vb;
            if (!va.is_zero()) row[i][b] = va;
        }
        std::swap(col_rows[a], col_rows[b]);
    }

    // row[dst] += c * row[src]
    void row_axpy(int dst, int src, const BigInt& c) {
        if (c.is_zero() || dst == src) return;
        for (const auto& [j, v] : row[src]) add_to(dst, j, c * v);
    }

    // col[dst] += c * col[src]
    void col_axpy(int dst, int src, const BigInt& c) {
        if (c.is_zero() || dst == src) return;
        std::vector<std::pair<int, BigInt>> src_entries;
        for (int i : col_rows[src]) src_entries.push_back({i, row[i].at(src)});
        for (auto& [i, v] : src_entries) add_to(i, dst, c * v);
    }

    // rows (a,b) <- (x*a + y*b, u*a + w*b); caller guarantees unimodularity
    void row_combine(int a, int b, const BigInt& x, const BigInt& y, const BigInt& u, const BigInt& w) {
        std::set<int> touched;
        for (auto& [j, v] : row[a]) touched.insert(j);
        for (auto& [j, v] : row[b]) touched.insert(j);
        for (int j : touched) {
            const BigInt* pa = find(a, j);
            const BigInt* pb = find(b, j);
            BigInt va = pa ? *pa : BigInt();
            BigInt vb = pb ? *pb : BigInt();
            BigInt na = x * va + y * vb;
            BigInt nb = u * va + w * vb;
            set(a, j, std::move(na));
            set(b, j, std::move(nb));
        }
    }

    void col_combine(int a, int b, const BigInt& x, const BigInt& y, const BigInt& u, const BigInt& w) {
        std::set<int> touched = col_rows[a];
        touched.insert(col_rows[b].begin(), col_rows[b].end());
        for (int i : touched) {
            const BigInt* pa = find(i, a);
            const BigInt* pb = find(i, b);
            BigInt va = pa ? *pa : BigInt();
            BigInt vb = pb ? *pb : BigInt();
            BigInt na = x * va + y * vb;
            BigInt nb = u * va + w * vb;
            set(i, a, std::move(na));
            set(i, b, std::move(nb));
        }
    }
};

// Transform accumulators. Row ops on M are mirrored on U (and inverted on
// Uinv); column ops on V (inverted on Vinv).
struct Transforms {
    std::optional<IntMat> U, V, Uinv, Vinv;

    void init(unsigned flags, int rows, int cols) {
        if (flags & SNF_U) U = IntMat::identity(rows);
        if (flags & SNF_UINV) Uinv = IntMat::identity(rows);
        if (flags & SNF_V) V = IntMat::identity(cols);
        if (flags & SNF_VINV) Vinv = IntMat::identity(cols);
    }
    void swap_rows(int a, int b) {
        if (U) U->swap_rows(a, b);
        if (Uinv) Uinv->swap_cols(a, b);
    }
    void swap_cols(int a, int b) {
        if (V) V->swap_cols(a, b);
        if (Vinv) Vinv->swap_rows(a, b);
    }
    void negate_row(int i) {
        if (U) U->negate_row(i);
        if (Uinv) Uinv->negate_col(i);
    }
    void negate_col(int j) {
        if (V) V->negate_col(j);
        if (Vinv) Vinv->negate_row(j);
    }
    void row_axpy(int dst, int src, const BigInt& c) {
        if (U) U->row_axpy(dst, src, c);
        if (Uinv) Uinv->col_axpy(src, dst, -c);
    }
    void col_axpy(int dst, int src, const BigInt& c) {
        if (V) V->col_axpy(dst, src, c);
        if (Vinv) Vinv->row_axpy(src, dst, -c);
    }
    // matches Work::row_combine with det(x w - y u) = +-1
    void row_combine(int a, int b, const BigInt& x, const BigInt& y, const BigInt& u, const BigInt& w) {
        BigInt det = x * w - y * u;
        if (U) {
            IntMat& m = *U;
            std::set<int> touched;
            for (auto& [j, v] : m.row(a)) touched.insert(j);
            for (auto& [j, v] : m.row(b)) touched.insert(j);
            for (int j : touched) {
                BigInt va = m.at(a, j), vb = m.at(b, j);
                m.set(a, j, x * va + y * vb);
                m.set(b, j, u * va + w * vb);
            }
        }
        if (Uinv) {
            // columns of Uinv get the inverse combine: inv([[x,y],[u,w]]) = det^-1 [[w,-y],[-u,x]]
            IntMat& m = *Uinv;
            BigInt wi = w, yi = -y, ui = -u, xi = x;
            if (det.is_neg()) {
                wi = -wi; yi = -yi; ui = -ui; xi = -xi;
            }
            for (int i = 0; i < m.rows(); ++i) {
                BigInt va = m.at(i, a), vb = m.at(i, b);
                if (va.is_zero() && vb.is_zero()) continue;
                m.set(i, a, va * wi + vb * ui);
                m.set(i, b, va * yi + vb * xi);
            }
        }
    }
    void col_combine(int a, int b, const BigInt& x, const BigInt& y, const BigInt& u, const BigInt& w) {
        BigInt det = x * w - y * u;
        if (V) {
            IntMat& m = *V;
            for (int i = 0; i < m.rows(); ++i) {
                BigInt va = m.at(i, a), vb = m.at(i, b);
                if (va.is_zero() && vb.is_zero()) continue;
                m.set(i, a, x * va + y * vb);
                m.set(i, b, u * va + w * vb);
            }
        }
        if (Vinv) {
            IntMat& m = *Vinv;
            BigInt wi = w, yi = -y, ui = -u, xi = x;
            if (det.is_neg()) {
                wi = -wi; yi = -yi; ui = -ui; xi = -xi;
            }
            std::set<int> touched;
            for (auto& [j, v] : m.row(a)) touched.insert(j);
            for (auto& [j, v] : m.row(b)) touched.insert(j);
            for (int j : touched) {
                BigInt va = m.at(a, j), vb = m.at(b, j);
                m.set(a, j, wi * va + ui * vb);
                m.set(b, j, yi * va + xi * vb);
            }
        }
    }
};

}  // namespace

SnfResult smith_normal_form(const IntMat& m, unsigned flags) {
    Work w(m);
    Transforms t;
    t.init(flags, m.rows(), m.cols());

    int n = std::min(m.rows(), m.cols());
    int k = 0;
    const BigInt one(1);

    for (; k < n; ++k) {
        // pivot search: smallest magnitude, ties broken by Markowitz count;
        // the scan is capped once a unit pivot is in hand, so huge matrices do
        // not pay a full sweep per elimination step
        int pr = -1, pc = -1;
        BigInt pv;
        long long best_cost = -1;
        bool found = false;
        bool have_unit = false;
        long long examined_after_unit = 0;
        for (int j = k; j < w.cols && !(have_unit && (best_cost == 0 || examined_after_unit > 2000)); ++j) {
            for (int i : w.col_rows[j]) {
                if (i < k) continue;
                const BigInt& v = *w.find(i, j);
                long long cost = (static_cast<long long>(w.row[i].size()) - 1) *
                                 (static_cast<long long>(w.col_rows[j].size()) - 1);
                bool better;
                if (!found)
                    better = true;
                else {
                    int cmp_abs = (v.abs() < pv.abs()) ? -1 : (pv.abs() < v.abs() ? 1 : 0);
                    better = cmp_abs < 0 || (cmp_abs == 0 && cost < best_cost);
                }
                if (better) {
                    found = true;
                    pr = i;
                    pc = j;
                    pv = v;
                    best_cost = cost;
                    have_unit = pv.abs().is_one();
                }
                if (have_unit) {
                    ++examined_after_unit;
                    if (best_cost == 0 || examined_after_unit > 2000) break;
                }
            }
        }
        if (!found) break;

        w.swap_rows(k, pr);
        t.swap_rows(k, pr);
        w.swap_cols(k, pc);
        t.swap_cols(k, pc);

        // clear column k then row k; gcd-combine when the pivot does not divide
        bool again = true;
        while (again) {
            again = false;
            // column
            while (true) {
                int i = -1;
                for (int r : w.col_rows[k])
                    if (r > k) {
                        i = r;
                        break;
                    }
                if (i < 0) break;
                BigInt a = *w.find(k, k);
                BigInt b = *w.find(i, k);
                BigInt q = b / a;
                if ((b % a).is_zero()) {
                    w.row_axpy(i, k, -q);
                    t.row_axpy(i, k, -q);
                } else {
                    BigInt x, y;
                    BigInt g = BigInt::gcd_ext(a, b, x, y);
                    // rows (k,i) <- (x*k + y*i, -(b/g)*k + (a/g)*i): pivot becomes g
                    BigInt u = -(b / g), v2 = a / g;
                    w.row_combine(k, i, x, y, u, v2);
                    t.row_combine(k, i, x, y, u, v2);
                }
            }
            // row
            while (true) {
                int j = -1;
                for (auto& [c, v] : w.row[k])
                    if (c > k) {
                        j = c;
                        break;
                    }
                if (j < 0) break;
                BigInt a = *w.find(k, k);
                BigInt b = *w.find(k, j);
                BigInt q = b / a;
                if ((b % a).is_zero()) {
                    w.col_axpy(j, k, -q);
                    t.col_axpy(j, k, -q);
                } else {
                    BigInt x, y;
                    BigInt g = BigInt::gcd_ext(a, b, x, y);
                    BigInt u = -(b / g), v2 = a / g;
                    w.col_combine(k, j, x, y, u, v2);
                    t.col_combine(k, j, x, y, u, v2);
                }
                // clearing the row may have refilled the column
                bool col_dirty = false;
                for (int r : w.col_rows[k])
                    if (r > k) {
                        col_dirty = true;
                        break;
                    }
                if (col_dirty) {
                    again = true;
                    break;
                }
            }
        }
        if (w.find(k, k)->is_neg()) {
            w.set(k, k, -*w.find(k, k));
            t.negate_row(k);
        }
    }

    int rank = k;

    // enforce divisibility chain d_i | d_{i+1}
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i + 1 < rank; ++i) {
            BigInt a = *w.find(i, i);
            BigInt b = *w.find(i + 1, i + 1);
            if ((b % a).is_zero()) continue;
            changed = true;
            // col i += col i+1, then 2x2 gcd dance: diag becomes (gcd, lcm)
            w.col_axpy(i, i + 1, one);
            t.col_axpy(i, i + 1, one);
            BigInt x, y;
            BigInt g = BigInt::gcd_ext(a, b, x, y);
            BigInt u = -(b / g), v2 = a / g;
            w.row_combine(i, i + 1, x, y, u, v2);
            t.row_combine(i, i + 1, x, y, u, v2);
            // now row i has the gcd at (i,i) and possibly an entry at (i,i+1)
            BigInt e = w.find(i, i + 1) ? *w.find(i, i + 1) : BigInt();
            if (!e.is_zero()) {
                BigInt q = e / *w.find(i, i);
                w.col_axpy(i + 1, i, -q);
                t.col_axpy(i + 1, i, -q);
            }
            BigInt e2 = w.find(i + 1, i) ? *w.find(i + 1, i) : BigInt();
            if (!e2.is_zero()) {
                BigInt q = e2 / *w.find(i, i);
                w.row_axpy(i + 1, i, -q);
                t.row_axpy(i + 1, i, -q);
            }
            if (w.find(i, i)->is_neg()) {
                w.set(i, i, -*w.find(i, i));
                t.negate_row(i);
            }
            if (w.find(i + 1, i + 1)->is_neg()) {
                w.set(i + 1, i + 1, -*w.find(i + 1, i + 1));
                t.negate_row(i + 1);
            }
        }
    }

    SnfResult res;
    res.rank = rank;
    for (int i = 0; i < rank; ++i) res.invariant_factors.push_back(*w.find(i, i));
    res.U = std::move(t.U);
    res.V = std::move(t.V);
    res.Uinv = std::move(t.Uinv);
    res.Vinv = std::move(t.Vinv);
    return res;
}

AbelianGroup cokernel_group(const IntMat& m) {
    SnfResult s = smith_normal_form(m, SNF_NONE);
    std::vector<long long> orders;
    for (const BigInt& d : s.invariant_factors) {
        if (d.is_one()) continue;
        orders.push_back(d.to_int64());
    }
    for (int i = s.rank; i < m.rows(); ++i) orders.push_back(0);
    return AbelianGroup::from_orders(orders);
}

IntMat kernel_basis(const IntMat& m) {
    SnfResult s = smith_normal_form(m, SNF_V);
    int kdim = m.cols() - s.rank;
    IntMat k(m.cols(), kdim);
    for (int c = 0; c < kdim; ++c) {
        int src = s.rank + c;
        for (int i = 0; i < m.cols(); ++i) {
            const BigInt& v = s.V->at(i, src);
            if (!v.is_zero()) k.set(i, c, v);
        }
    }
    return k;
}

bool solve_int(const IntMat& K, const IntMat& B, IntMat& W) {
    if (K.rows() != B.rows()) throw std::invalid_argument("solve_int: shape mismatch");
    SnfResult s = smith_normal_form(K, SNF_U | SNF_V);
    IntMat ub = s.U->mul(B);
    IntMat y(K.cols(), B.cols());
    for (int i = 0; i < K.rows(); ++i) {
        for (const auto& [j, v] : ub.row(i)) {
            if (i >= s.rank) return false;  // inconsistent
            const BigInt& d = s.invariant_factors[i];
            if (!(v % d).is_zero()) return false;  // no integral solution
            y.set(i, j, v / d);
        }
    }
    W = s.V->mul(y);
    return true;
}

}  // namespace h4
