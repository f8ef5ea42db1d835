#pragma once

#include <map>
#include <string>
#include <vector>

#include "h4/abelian.hpp"
#include "h4/intmatrix.hpp"

namespace h4 {

/**
 * A finite group as a multiplication table (indices into a fixed element
 * list, identity first). Associativity, identity and inverses are verified
 * at construction; tables stay small enough for brute-force cohomology.
 */
class MultTable {
public:
    static MultTable from_table(std::vector<std::vector<int>> table);
    static MultTable from_text(const std::string& text);  // n then n^2 indices
    static MultTable load_file(const std::string& path);
    static MultTable cyclic(int n);
    static MultTable product(const MultTable& a, const MultTable& b);
    /// Extraspecial group p^{1+2m}: for p = 2 the variant is the Arf
    /// invariant of the defining quadratic form (0 plus / 1 minus); for odd p
    /// the exponent-p group built from the standard symplectic form.
    static MultTable extraspecial(long long p, int m, int variant);

    int order() const { return n_; }
    int mul(int a, int b) const { return table_[a][b]; }
    int inverse(int a) const { return inv_[a]; }
    int element_order(int a) const;
    std::string to_text() const;

private:
    int n_ = 1;
    std::vector<std::vector<int>> table_;
    std::vector<int> inv_;
    void validate();
};

/// Integral cohomology of a tiny group through the normalized bar cochain
/// complex and sparse Smith reduction. Degrees 0..4.
AbelianGroup bar_cohomology(const MultTable& g, int degree, int cap = 12);

/// Matrix of the normalized bar coboundary C^k -> C^{k+1} as triples; rows
/// are (k+1)-tuples of non-identity elements, columns k-tuples, both indexed
/// base (n-1).
std::vector<Triple> bar_coboundary_matrix(const MultTable& g, int k);

/// Closed form for cyclic groups: Z in degree 0, 0 in odd degrees,
/// Z/n in positive even degrees.
AbelianGroup cyclic_cohomology(long long n, int k);

/// Normalized cochains: sparse map from k-tuples of non-identity elements.
using Cocycle = std::map<std::vector<int>, long long>;

/**
 * A computed presentation of H^4(G;Z) supporting exact cocycle arithmetic:
 * classes are expressed in invariant-factor coordinates, generator cocycles
 * can be extracted, and arbitrary 4-cocycles can be located in the group.
 */
class H4Presentation {
public:
    explicit H4Presentation(const MultTable& g, int cap = 12);

    const MultTable& group_table() const { return g_; }
    AbelianGroup group() const { return h4_; }
    const std::vector<long long>& invariant_factors() const { return factors_; }

    /// true iff d(x) = 0 for the degree-4 coboundary
    bool is_cocycle(const Cocycle& x) const;
    /// coordinates of the class of a valid cocycle, one entry per invariant factor
    std::vector<long long> class_of(const Cocycle& x) const;
    /// a cocycle whose class generates a cyclic summand of maximal order
    Cocycle generator_cocycle() const;

private:
    MultTable g_;
    AbelianGroup h4_;
    std::vector<long long> factors_;        // nonunit invariant factors of H^4
    std::vector<int> factor_rows_;          // rows of U picking those factors
    IntMat U_, Uinv_;                       // transforms of the SNF of d^3
    std::vector<BigInt> snf_diag_;          // full diagonal of d^3
    int rank_d3_ = 0;
    std::vector<Triple> d4_;                // degree-4 coboundary (rows (n-1)^5)
    long long c4_ = 0, c5_ = 0;

    std::vector<BigInt> cocycle_vector(const Cocycle& x) const;
};

/**
 * Restriction of a 4-cocycle of G along a subgroup given by its element
 * indices (closed under multiplication, identity included); the result is
 * expressed in the computed presentation of H^4 of the subgroup, returned
 * together with that presentation's invariant factors.
 */
struct RestrictionResult {
    AbelianGroup h4_subgroup;
    std::vector<long long> coords;  // class coordinates in the subgroup's H^4
};
RestrictionResult restriction_on_h4(const MultTable& g, const std::vector<int>& subgroup,
                                    const Cocycle& x, int cap = 12);

}  // namespace h4
