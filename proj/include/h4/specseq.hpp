#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "h4/abelian.hpp"
#include "h4/intmatrix.hpp"

namespace h4 {

/**
 * Low-degree spectral-sequence bookkeeping: pages hold cells in total degree
 * <= 5 with per-cell provenance. A cell may be marked `unknown`, in which
 * case it blocks every bound that would need its value; bounds are never
 * silently sharpened past undetermined data.
 */
struct PageCell {
    AbelianGroup group;
    std::string provenance;
    bool unknown = false;
};

class Page {
public:
    static constexpr int kMaxTotal = 5;

    struct Entry {
        int i = 0, j = 0;
        PageCell cell;
    };

    /// Build a page from explicit entries; missing cells inside the range
    /// default to trivial with provenance "asserted-zero". Every nonzero or
    /// unknown cell must carry provenance. When the fiber has trivial H^1
    /// (every finite fiber does), cells in row j = 1 must be trivial.
    static Page assemble(const std::vector<Entry>& entries, int page_number = 2,
                         bool fiber_h1_trivial = true);

    static Page load_file(const std::string& path);
    static Page load_json_text(const std::string& text);

    int page_number() const { return page_number_; }
    const std::string& name() const { return name_; }

    const PageCell& cell(int i, int j) const;  // trivial cell when absent
    bool is_zero(int i, int j) const;
    std::vector<Entry> nonzero_cells() const;

    /// Differentials listed in the document (for `page run`).
    struct FileDifferential {
        int r = 2;
        int i = 0, j = 0;
        std::string kind;  // "zero" | "injective" | "mult" | "matrix"
        long long k = 0;
        std::vector<Triple> matrix;
        int matrix_rows = 0, matrix_cols = 0;
    };
    const std::vector<FileDifferential>& file_differentials() const { return file_diffs_; }

private:
    friend Page turn_page(const Page&, const std::vector<struct DifferentialSpec>&);
    int page_number_ = 2;
    std::string name_;
    std::map<std::pair<int, int>, PageCell> cells_;
    std::vector<FileDifferential> file_diffs_;
};

/// One differential on page r: source (i, j) -> (i + r, j - r + 1).
struct DifferentialSpec {
    enum class Kind { Zero, Injective, MultiplicationBy, Matrix };
    int r = 2;
    int source_i = 0, source_j = 0;
    Kind kind = Kind::Zero;
    long long k = 0;     // multiplication-by-k
    IntMat map;          // Matrix kind: target coords x source coords

    static DifferentialSpec zero(int r, int i, int j);
    static DifferentialSpec injective(int r, int i, int j);
    static DifferentialSpec mult(int r, int i, int j, long long k);
    static DifferentialSpec matrix(int r, int i, int j, IntMat m);
};

/// Apply the listed differentials: each affected cell is replaced by the
/// kernel or cokernel. Cell orders never grow (checked). The result lives on
/// page r + 1.
Page turn_page(const Page& p, const std::vector<DifferentialSpec>& diffs);

/// Product of the orders of the cells in total degree 4; rejects free or
/// unknown cells there.
BigInt degree4_order_bound(const Page& p);

/// Upper and lower bounds on |H^4| from the current page: the upper bound is
/// the full product; the lower bound multiplies only cells that no present or
/// future differential can touch (all potential sources and targets are known
/// zero). `exact` when they agree.
struct Degree4Interval {
    BigInt lower, upper;
    bool exact = false;
};
Degree4Interval degree4_interval(const Page& p);

/**
 * The comparison page of a central extension nG -> G with H^1(G; Z/n) = 0,
 * H_1(G)_(p) = 0 and H_2(G)_(p) cyclic of order N (n | N, both powers of p):
 *
 *     (Z/n) y^2   .    .
 *        0        0    0
 *     (Z/n) y     0   Z/n  [Z/n] xy
 *        0        0    0    0      0
 *        Z        0    0   Z/N    H4   H5
 *
 * d3(y) = (N/n) x is an inclusion and the Leibniz rule gives
 * d3(y^2) = (2N/n) xy.
 */
Page schur_cover_page(long long p, long long n, long long N,
                      const std::optional<AbelianGroup>& h4 = std::nullopt);

/// d3 differentials of the Schur-cover page (derived, not guessed).
std::vector<DifferentialSpec> schur_cover_d3(long long n, long long N);

/// The three cover-cokernel cases: for a central extension nG -> G as above,
/// the pullback H^4(G) -> H^4(nG) is injective with cokernel of order
/// dividing `divisor`; the flags carry the case-specific consequences about
/// restrictions to the central subgroup.
struct CoverBound {
    long long p = 2, n = 1, N = 1;
    long long divisor = 1;
    bool all_restrict_trivially_to_central = false;  // odd p case
    bool coker_max_needs_central_class = false;      // p = 2 cyclic case
    bool vanish_on_central_two_of_four = false;      // H2 = 4 case
    Page e2, e4;
};
CoverBound cover_cokernel_bound(long long p, const AbelianGroup& h2_part, long long cover_n);

}  // namespace h4
