#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "h4/abelian.hpp"
#include "h4/bigint.hpp"

namespace h4 {

struct Triple {
    int row = 0, col = 0;
    long long val = 0;
};

/// Sparse integer matrix with arbitrary-precision entries (no stored zeros).
class IntMat {
public:
    IntMat() = default;
    IntMat(int rows, int cols) : rows_(rows), cols_(cols), row_(rows) {}

    static IntMat identity(int n);
    static IntMat from_triples(int rows, int cols, const std::vector<Triple>& ts);
    static IntMat diagonal(const std::vector<long long>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const BigInt& at(int i, int j) const;
    void set(int i, int j, BigInt v);
    void add_to(int i, int j, const BigInt& v);

    const std::map<int, BigInt>& row(int i) const { return row_[i]; }
    long long nnz() const;
    bool is_zero() const;

    IntMat transpose() const;
    IntMat mul(const IntMat& o) const;
    std::vector<BigInt> apply(const std::vector<BigInt>& x) const;

    bool operator==(const IntMat& o) const;

    // elementary operations (used by elimination; exposed for tests)
    void swap_rows(int i, int k);
    void swap_cols(int j, int k);
    void negate_row(int i);
    void negate_col(int j);
    void row_axpy(int dst, int src, const BigInt& c);  // row[dst] += c*row[src]
    void col_axpy(int dst, int src, const BigInt& c);  // col[dst] += c*col[src]

private:
    int rows_ = 0, cols_ = 0;
    std::vector<std::map<int, BigInt>> row_;
};

enum SnfFlags : unsigned {
    SNF_NONE = 0,
    SNF_U = 1,
    SNF_V = 2,
    SNF_UINV = 4,
    SNF_VINV = 8,
};

struct SnfResult {
    std::vector<BigInt> invariant_factors;  // nonzero d1 | d2 | ... | dr
    int rank = 0;
    std::optional<IntMat> U, V, Uinv, Vinv;  // D = U * m * V, U/V unimodular
};

/// Smith normal form via sparse elimination with Markowitz-style pivoting.
/// Total: defined for every integer matrix, including empty ones.
SnfResult smith_normal_form(const IntMat& m, unsigned flags = SNF_U | SNF_V);

/// Cokernel Z^rows / im(m) in invariant-factor form (unit factors dropped).
AbelianGroup cokernel_group(const IntMat& m);

/// Basis of the integer kernel lattice {x : m x = 0}, one column per basis vector.
IntMat kernel_basis(const IntMat& m);

/// Solve K * W = B exactly over the integers; returns false when no integral
/// solution exists. K need not be square.
bool solve_int(const IntMat& K, const IntMat& B, IntMat& W);

}  // namespace h4
