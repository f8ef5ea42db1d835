#pragma once

#include <cstdint>
#include <vector>

#include "h4/intmatrix.hpp"

namespace h4 {

/// Dense matrix over the prime field F_p, entries reduced to {0,...,p-1}.
class FpMat {
public:
    FpMat() = default;
    FpMat(long long p, int rows, int cols);

    static FpMat identity(long long p, int n);
    static FpMat from_rows(long long p, const std::vector<std::vector<long long>>& rows);

    long long p() const { return p_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    long long at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
    void set(int i, int j, long long v);

    FpMat mul(const FpMat& o) const;
    FpMat transpose() const;
    FpMat pow(long long e) const;
    bool operator==(const FpMat& o) const;

    bool is_identity() const;
    int rank() const;
    bool invertible() const { return rows_ == cols_ && rank() == rows_; }
    FpMat inverse() const;  // throws if singular

    /// Echelonized basis of the right null space, one column per basis vector;
    /// dimension = cols - rank.
    FpMat kernel() const;

    /// Stacks matrices vertically (shared column count).
    static FpMat vstack(const std::vector<FpMat>& parts);

    std::vector<long long> apply(const std::vector<long long>& x) const;

private:
    long long p_ = 2;
    int rows_ = 0, cols_ = 0;
    std::vector<long long> a_;
};

/// Rank over F_p of a huge sparse integer matrix given by triples, without
/// materializing dense storage; rows are inserted into a packed echelon basis.
/// Stops early once `target` is reached (pass -1 to disable). p must be 2 or 3.
long long sparse_rank_mod_p(int rows, int cols, const std::vector<Triple>& entries,
                            long long p, long long target);

/// Reduced row echelon form together with the pivot columns.
std::pair<FpMat, std::vector<int>> fp_rref(const FpMat& m);

/// Solve K X = B over F_p for K of full column rank; false when inconsistent.
bool fp_solve(const FpMat& K, const FpMat& B, FpMat& X);

/// Extend the (independent) columns of `sub` to a basis of F_p^n using
/// standard basis vectors; returns an invertible n x n matrix whose first
/// sub.cols() columns are `sub`.
FpMat complete_to_basis(const FpMat& sub);

}  // namespace h4
