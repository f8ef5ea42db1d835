#include "h4/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "h4/errors.hpp"
#include "h4/fpmatrix.hpp"
#include "h4/pgroups.hpp"

namespace h4 {

// -- multiplication tables ----------------------------------------------------

void MultTable::validate() {
    n_ = static_cast<int>(table_.size());
    if (n_ == 0) throw ValidationError("MultTable: empty table");
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != n_) throw ValidationError("MultTable: ragged table");
        for (int v : row)
            if (v < 0 || v >= n_) throw ValidationError("MultTable: index out of range");
    }
    for (int a = 0; a < n_; ++a)
        if (table_[0][a] != a || table_[a][0] != a)
            throw ValidationError("MultTable: index 0 is not a two-sided identity");
    inv_.assign(n_, -1);
    for (int a = 0; a < n_; ++a) {
        for (int b = 0; b < n_; ++b)
            if (table_[a][b] == 0 && table_[b][a] == 0) inv_[a] = b;
        if (inv_[a] < 0) throw ValidationError("MultTable: element without a two-sided inverse");
    }
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            for (int c = 0; c < n_; ++c)
                if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                    throw ValidationError("MultTable: associativity fails");
}

MultTable MultTable::from_table(std::vector<std::vector<int>> table) {
    MultTable t;
    t.table_ = std::move(table);
    t.validate();
    return t;
}

MultTable MultTable::from_text(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    std::vector<long long> nums;
    while (in >> tok) {
        if (tok[0] == '#') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        nums.push_back(std::stoll(tok));
    }
    if (nums.empty()) throw ValidationError("MultTable: empty file");
    int n = static_cast<int>(nums[0]);
    if (static_cast<long long>(nums.size()) != 1 + static_cast<long long>(n) * n)
        throw ValidationError("MultTable: expected n followed by n^2 indices");
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) table[i][j] = static_cast<int>(nums[1 + i * n + j]);
    return from_table(std::move(table));
}

MultTable MultTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open multiplication table: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

MultTable MultTable::cyclic(int n) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
    return from_table(std::move(t));
}

MultTable MultTable::product(const MultTable& a, const MultTable& b) {
    int n = a.order() * b.order();
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    auto enc = [&](int x, int y) { return x * b.order() + y; };
    for (int x1 = 0; x1 < a.order(); ++x1)
        for (int y1 = 0; y1 < b.order(); ++y1)
            for (int x2 = 0; x2 < a.order(); ++x2)
                for (int y2 = 0; y2 < b.order(); ++y2)
                    t[enc(x1, y1)][enc(x2, y2)] = enc(a.mul(x1, x2), b.mul(y1, y2));
    return from_table(std::move(t));
}

MultTable MultTable::extraspecial(long long p, int m, int variant) {
    FpMat gram(p, 2 * m, 2 * m);
    if (p == 2) {
        QuadraticForm q = variant ? QuadraticForm::anisotropic(m) : QuadraticForm::hyperbolic(m);
        gram = q.upper;  // bilinear omega with omega(u,u) = Q(u)
    } else {
        gram = standard_symplectic_gram(p, m);
    }
    ExtraspecialGroup g(p, gram);
    auto elems = g.elements();
    // identity is elems[0] by construction
    std::map<ExtraspecialGroup::Elt, int> index;
    for (size_t i = 0; i < elems.size(); ++i) index[elems[i]] = static_cast<int>(i);
    int n = static_cast<int>(elems.size());
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[i][j] = index.at(g.mul(elems[i], elems[j]));
    return from_table(std::move(t));
}

int MultTable::element_order(int a) const {
    int x = a, ord = 1;
    while (x != 0) {
        x = mul(x, a);
        ++ord;
    }
    return ord;
}

std::string MultTable::to_text() const {
    std::ostringstream os;
    os << n_ << "\n";
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) os << table_[i][j] << (j + 1 == n_ ? "" : " ");
        os << "\n";
    }
    return os.str();
}

// -- normalized bar complex ----------------------------------------------------

namespace {

// k-tuples of non-identity elements indexed in base (n-1); element i in a
// tuple slot means group element i+1
long long tuple_count(int n, int k) {
    long long c = 1;
    for (int i = 0; i < k; ++i) c *= (n - 1);
    return c;
}

void decode_tuple(long long idx, int n, int k, std::vector<int>& out) {
    out.resize(k);
    for (int i = k - 1; i >= 0; --i) {
        out[i] = static_cast<int>(idx % (n - 1)) + 1;
        idx /= (n - 1);
    }
}

long long encode_tuple(const std::vector<int>& t, int n) {
    long long idx = 0;
    for (int g : t) idx = idx * (n - 1) + (g - 1);
    return idx;
}

// coboundary d: C^k -> C^{k+1} as triples (row = (k+1)-tuple, col = k-tuple)
std::vector<Triple> bar_coboundary(const MultTable& g, int k) {
    int n = g.order();
    long long rows = tuple_count(n, k + 1);
    std::vector<Triple> out;
    out.reserve(static_cast<size_t>(rows) * (k + 2));
    std::vector<int> sigma, face;
    for (long long r = 0; r < rows; ++r) {
        decode_tuple(r, n, k + 1, sigma);
        // face 0: drop the first entry
        face.assign(sigma.begin() + 1, sigma.end());
        out.push_back({static_cast<int>(r), static_cast<int>(encode_tuple(face, n)), 1});
        // inner faces: multiply adjacent entries
        int sign = -1;
        for (int i = 0; i + 1 <= k; ++i) {
            int prod = g.mul(sigma[i], sigma[i + 1]);
            if (prod != 0) {
                face.clear();
                for (int j = 0; j < i; ++j) face.push_back(sigma[j]);
                face.push_back(prod);
                for (int j = i + 2; j <= k; ++j) face.push_back(sigma[j]);
                out.push_back({static_cast<int>(r), static_cast<int>(encode_tuple(face, n)), sign});
            }
            sign = -sign;
        }
        // last face: drop the final entry
        face.assign(sigma.begin(), sigma.end() - 1);
        out.push_back({static_cast<int>(r), static_cast<int>(encode_tuple(face, n)), sign});
    }
    return out;
}

// merge duplicate (row, col) contributions and drop zeros
std::vector<Triple> merge_triples(std::vector<Triple> ts) {
    std::sort(ts.begin(), ts.end(), [](const Triple& a, const Triple& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    std::vector<Triple> out;
    for (const Triple& t : ts) {
        if (!out.empty() && out.back().row == t.row && out.back().col == t.col)
            out.back().val += t.val;
        else
            out.push_back(t);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Triple& t) { return t.val == 0; }),
              out.end());
    return out;
}

void check_dd_zero(const std::vector<Triple>& a, const std::vector<Triple>& b, long long mid_rank) {
    // verify b * a = 0 by sparse accumulation; entries are tiny
    std::vector<std::vector<std::pair<int, long long>>> b_by_col(mid_rank);
    for (const Triple& t : b) b_by_col[t.col].push_back({t.row, t.val});
    // group a by column (of a), accumulate per output column of the product
    std::map<int, std::vector<std::pair<int, long long>>> a_by_col;
    for (const Triple& t : a) a_by_col[t.col].push_back({t.row, t.val});
    for (auto& [col, entries] : a_by_col) {
        std::map<int, long long> acc;
        for (auto [mid, v] : entries)
            for (auto [row, w] : b_by_col[mid]) acc[row] += v * w;
        for (auto& [row, v] : acc)
            if (v != 0) throw InternalError("bar complex: d compose d is nonzero");
    }
}

struct BarAnswer {
    AbelianGroup group;
    SnfResult snf_a;  // of d^{degree-1}, possibly with transforms
    std::vector<Triple> d_top;
    long long c_k = 0, c_k1 = 0;
};

BarAnswer bar_compute(const MultTable& g, int degree, int cap, unsigned snf_flags) {
    if (g.order() > cap)
        throw ValidationError("bar_cohomology: group order " + std::to_string(g.order()) +
                              " exceeds the cap " + std::to_string(cap) +
                              " (raise the cap explicitly; degree-5 cochains grow fast)");
    if (degree < 0 || degree > 4) throw ValidationError("bar_cohomology: degree must be 0..4");
    int n = g.order();
    BarAnswer out;
    if (degree == 0) {
        out.group = AbelianGroup::from_orders({0});
        return out;
    }
    // A = d^{degree-1}: C^{degree-1} -> C^{degree}; B = d^{degree}
    std::vector<Triple> A = merge_triples(bar_coboundary(g, degree - 1));
    std::vector<Triple> B = merge_triples(bar_coboundary(g, degree));
    long long ck = tuple_count(n, degree);
    long long ck1 = tuple_count(n, degree + 1);
    check_dd_zero(A, B, ck);

    IntMat Am = IntMat::from_triples(static_cast<int>(ck), static_cast<int>(tuple_count(n, degree - 1)), A);
    SnfResult snf = smith_normal_form(Am, snf_flags);

    // free rank of H^degree = dim ker B - rank A; certify rank B by squeeze:
    // rank_p(B) <= rank(B) <= ck - rank(A), equality certifies both
    long long target = ck - snf.rank;
    long long rank_b = -1;
    for (long long p : {2LL, 3LL}) {
        long long rp = sparse_rank_mod_p(static_cast<int>(ck1), static_cast<int>(ck), B, p, target);
        if (rp == target) {
            rank_b = rp;
            break;
        }
    }
    if (rank_b < 0) {
        // exact integer rank (slow path; hit only when H^degree has free rank
        // or large prime torsion in the next degree up)
        IntMat Bm = IntMat::from_triples(static_cast<int>(ck1), static_cast<int>(ck), B);
        rank_b = smith_normal_form(Bm, SNF_NONE).rank;
    }
    long long kappa = ck - rank_b;
    long long free_rank = kappa - snf.rank;
    if (free_rank < 0) throw InternalError("bar_cohomology: negative free rank");

    std::vector<long long> orders;
    for (const BigInt& d : snf.invariant_factors)
        if (!d.is_one()) orders.push_back(d.to_int64());
    for (long long i = 0; i < free_rank; ++i) orders.push_back(0);
    out.group = AbelianGroup::from_orders(orders);
    out.snf_a = std::move(snf);
    out.d_top = std::move(B);
    out.c_k = ck;
    out.c_k1 = ck1;
    return out;
}

}  // namespace

AbelianGroup bar_cohomology(const MultTable& g, int degree, int cap) {
    return bar_compute(g, degree, cap, SNF_NONE).group;
}

std::vector<Triple> bar_coboundary_matrix(const MultTable& g, int k) {
    if (k < 0) throw ValidationError("bar_coboundary_matrix: degree must be >= 0");
    return merge_triples(bar_coboundary(g, k));
}

AbelianGroup cyclic_cohomology(long long n, int k) {
    if (n < 1 || k < 0) throw ValidationError("cyclic_cohomology: bad arguments");
    if (k == 0) return AbelianGroup::from_orders({0});
    if (k % 2) return AbelianGroup::trivial();
    return AbelianGroup::cyclic(n);
}

H4Presentation::H4Presentation(const MultTable& g, int cap) : g_(g) {
    BarAnswer ans = bar_compute(g, 4, cap, SNF_U | SNF_UINV);
    h4_ = ans.group;
    if (!h4_.is_finite()) throw InternalError("H4Presentation: expected a finite group");
    rank_d3_ = ans.snf_a.rank;
    for (int i = 0; i < ans.snf_a.rank; ++i) {
        snf_diag_.push_back(ans.snf_a.invariant_factors[i]);
        if (!ans.snf_a.invariant_factors[i].is_one()) {
            factors_.push_back(ans.snf_a.invariant_factors[i].to_int64());
            factor_rows_.push_back(i);
        }
    }
    U_ = std::move(*ans.snf_a.U);
    Uinv_ = std::move(*ans.snf_a.Uinv);
    d4_ = std::move(ans.d_top);
    c4_ = ans.c_k;
    c5_ = ans.c_k1;
}

std::vector<BigInt> H4Presentation::cocycle_vector(const Cocycle& x) const {
    std::vector<BigInt> v(c4_);
    int n = g_.order();
    for (const auto& [tuple, val] : x) {
        if (static_cast<int>(tuple.size()) != 4) throw ValidationError("cocycle tuples must have length 4");
        for (int e : tuple) {
            if (e <= 0 || e >= n)
                throw ValidationError("cocycle tuples must consist of non-identity element indices");
        }
        v[encode_tuple(tuple, n)] += BigInt(val);
    }
    return v;
}

bool H4Presentation::is_cocycle(const Cocycle& x) const {
    std::vector<BigInt> v = cocycle_vector(x);
    std::vector<BigInt> out(c5_);
    for (const Triple& t : d4_)
        if (!v[t.col].is_zero()) out[t.row] += BigInt(t.val) * v[t.col];
    for (const BigInt& b : out)
        if (!b.is_zero()) return false;
    return true;
}

std::vector<long long> H4Presentation::class_of(const Cocycle& x) const {
    if (!is_cocycle(x)) throw ValidationError("class_of: input is not a cocycle (coboundary check failed)");
    std::vector<BigInt> v = cocycle_vector(x);
    std::vector<BigInt> y = U_.apply(v);
    // coordinates beyond the rank must vanish for a genuine cocycle
    for (long long i = rank_d3_; i < c4_; ++i)
        if (!y[i].is_zero()) throw InternalError("class_of: cocycle has free coordinates");
    std::vector<long long> coords;
    for (size_t k = 0; k < factors_.size(); ++k) {
        BigInt m = y[factor_rows_[k]].mod_euclid(BigInt(factors_[k]));
        coords.push_back(m.to_int64());
    }
    return coords;
}

Cocycle H4Presentation::generator_cocycle() const {
    if (factors_.empty()) return {};
    // the last invariant factor is the largest; its preimage under U is a
    // cocycle generating a maximal-order cyclic summand
    int row = factor_rows_.back();
    Cocycle x;
    int n = g_.order();
    std::vector<int> tuple;
    for (int i = 0; i < Uinv_.rows(); ++i) {
        const BigInt& v = Uinv_.at(i, row);
        if (v.is_zero()) continue;
        decode_tuple(i, n, 4, tuple);
        x[tuple] = v.to_int64();
    }
    if (!is_cocycle(x)) throw InternalError("generator_cocycle: preimage is not a cocycle");
    return x;
}

RestrictionResult restriction_on_h4(const MultTable& g, const std::vector<int>& subgroup,
                                    const Cocycle& x, int cap) {
    // subgroup closure / identity checks, and the induced multiplication table
    std::vector<int> elems = subgroup;
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (elems.empty() || elems[0] != 0)
        throw ValidationError("restriction_on_h4: subgroup must contain the identity index 0");
    std::map<int, int> to_sub;
    for (size_t i = 0; i < elems.size(); ++i) to_sub[elems[i]] = static_cast<int>(i);
    int h = static_cast<int>(elems.size());
    std::vector<std::vector<int>> table(h, std::vector<int>(h));
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
            int prod = g.mul(elems[i], elems[j]);
            auto it = to_sub.find(prod);
            if (it == to_sub.end())
                throw ValidationError("restriction_on_h4: element set is not closed under multiplication");
            table[i][j] = it->second;
        }
    MultTable sub = MultTable::from_table(std::move(table));

    Cocycle restricted;
    std::vector<int> tuple(4);
    for (int a = 1; a < h; ++a)
        for (int b = 1; b < h; ++b)
            for (int c = 1; c < h; ++c)
                for (int d = 1; d < h; ++d) {
                    std::vector<int> gt = {elems[a], elems[b], elems[c], elems[d]};
                    auto it = x.find(gt);
                    if (it == x.end() || it->second == 0) continue;
                    tuple = {a, b, c, d};
                    restricted[tuple] = it->second;
                }

    H4Presentation pres(sub, cap);
    RestrictionResult out;
    out.h4_subgroup = pres.group();
    out.coords = pres.class_of(restricted);
    return out;
}

}  // namespace h4
