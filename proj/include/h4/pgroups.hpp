#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "h4/abelian.hpp"
#include "h4/fpmatrix.hpp"

namespace h4 {

/**
 * An F_p vector space with a group action given by generator matrices.
 * Vectors are columns; a generator g sends v to g*v. Every generator must be
 * invertible mod p. An empty generator list means "module with unspecified
 * action" (pure dimension bookkeeping in closed-form answers).
 */
struct ModuleWithAction {
    long long p = 2;
    int dim = 0;
    std::vector<FpMat> generators;
    std::string name;

    void validate() const;  // dimensions and invertibility
};

// -- functors on modules ------------------------------------------------

/// contragredient action (g^{-1})^T
ModuleWithAction dual_module(const ModuleWithAction& m);
/// Sym^2, basis x_i x_j with i <= j in lexicographic order
ModuleWithAction sym2_module(const ModuleWithAction& m);
/// Alt^2 (quotient of the tensor square by repeated tensorands), basis e_i ^ e_j, i < j
ModuleWithAction alt2_module(const ModuleWithAction& m);
/// Alt^3, basis e_i ^ e_j ^ e_k, i < j < k lexicographic
ModuleWithAction alt3_module(const ModuleWithAction& m);

/**
 * Twist by the k-th tensor power of the line spanned by a symplectic form
 * inside Alt^2(E^*): the generator with GSp multiplier a acts on the line by
 * a^{-1}, so the twisted action scales generator i by multipliers[i]^{-k}.
 */
ModuleWithAction line_twist(const ModuleWithAction& m, const std::vector<long long>& multipliers, int k);

/**
 * Alt^2(E^*)_omega: the kernel of the symplectic contraction
 * Alt^2(E^*) -> F_p against omega^{-1}, as a module under the dualized action
 * of `base`. Requires omega nondegenerate and the span to be invariant.
 */
ModuleWithAction alt2_dual_omega_complement(const ModuleWithAction& base, const FpMat& omega_gram);

/// Alt^3(E^*) / (E^* wedge omega), the quotient by the image of f -> f ^ omega.
ModuleWithAction alt3_dual_mod_wedge(const ModuleWithAction& base, const FpMat& omega_gram);

struct FixedPoints {
    int dimension = 0;
    FpMat basis;  // columns
};

/// Simultaneous kernel of (g - 1) over all generators.
FixedPoints fixed_points(const ModuleWithAction& m);

// -- submodule / quotient plumbing --------------------------------------

/// Action restricted to the column span of `basis`; throws when not invariant.
std::vector<FpMat> restrict_action(const std::vector<FpMat>& gens, const FpMat& basis);

/// Action induced on the quotient by the column span of `sub`.
std::vector<FpMat> quotient_action(const std::vector<FpMat>& gens, const FpMat& sub);

// -- quadratic forms over F_2 --------------------------------------------

/// Q(v) = sum_{i<=j} c_{ij} v_i v_j with an upper-triangular coefficient
/// matrix; the polar form B_Q is computed, never stored.
struct QuadraticForm {
    int dim = 0;
    FpMat upper;  // over F_2, entries above or on the diagonal

    static QuadraticForm from_upper(const FpMat& c);
    /// x_0 x_1 + x_2 x_3 + ... (Arf 0)
    static QuadraticForm hyperbolic(int m);
    /// x_0^2 + x_0 x_1 + x_1^2 + hyperbolic rest (Arf 1)
    static QuadraticForm anisotropic(int m);

    long long evaluate(const std::vector<long long>& v) const;
    FpMat bilinear() const;  // B_Q(x,y) = Q(x+y) - Q(x) - Q(y), alternating
};

struct QuadraticFormAnalysis {
    FpMat bilinear;
    int arf = 0;           // majority value of Q over all vectors
    bool nondegenerate = false;
    long long ones = 0, zeros = 0;
};
QuadraticFormAnalysis quadratic_form_analyze(const QuadraticForm& q);

// -- closed-form cohomology ----------------------------------------------

/**
 * Description of a cohomology group as a filtered module: layers from the
 * bottom (submodule) up. The order is always determined by the layers; the
 * isomorphism type as a plain abelian group is claimed only when `group` is
 * set. `extension_known == false` marks filtrations whose extension data the
 * closed form does not determine.
 */
struct CohomologyDescription {
    long long p = 2;
    int degree = 0;
    std::vector<ModuleWithAction> layers;
    bool split = true;
    bool extension_known = true;
    std::optional<AbelianGroup> group;
    BigInt order;
    long long exponent_bound = 1;
    std::string note;
};

/// H^j of the elementary abelian group p^n for j in {2,3,4}, with the
/// GL_n(F_p) action realized on standard generators.
CohomologyDescription elem_abelian_cohomology(long long p, int n, int degree);

/// H^j of the extraspecial group p^{1+2m} of exponent p (p odd, m >= 2).
/// Optional (matrix, scalar) pairs must satisfy omega(gu, gv) = a omega(u, v)
/// against the standard symplectic form; their induced action is attached to
/// every layer.
CohomologyDescription extraspecial_odd_cohomology(
    long long p, int m, int degree,
    const std::vector<std::pair<FpMat, long long>>& gsp_pairs = {});

/// H^4 of the extraspecial group 2^{1+2m} (m >= 2); arf 0 is plus type.
CohomologyDescription extraspecial_two_h4(int m, int arf);

/// H^1 = E^* and H^2 = Alt^2(E^*)/B_Q of 2^{1+2m}, m >= 2.
std::pair<CohomologyDescription, CohomologyDescription> extraspecial_two_low(int m, int arf);

// -- Sq^1 on the polynomial model of mod-2 cohomology ---------------------

/// Polynomial in F_2[x_0..x_{d-1}] stored as a set of exponent vectors.
class PolyF2 {
public:
    PolyF2() = default;
    explicit PolyF2(int nvars) : nvars_(nvars) {}
    static PolyF2 variable(int i, int nvars);
    static PolyF2 monomial(const std::vector<int>& exponents);
    static PolyF2 of_quadratic_form(const QuadraticForm& q);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::set<std::vector<int>>& terms() const { return terms_; }

    PolyF2 operator+(const PolyF2& o) const;
    PolyF2 operator*(const PolyF2& o) const;
    bool operator==(const PolyF2& o) const { return terms_ == o.terms_; }

    std::string to_string() const;

private:
    int nvars_ = 0;
    std::set<std::vector<int>> terms_;
};

/// The derivation with Sq1(x) = x^2 on degree-1 generators, extended by the
/// Leibniz rule.
PolyF2 sq1(const PolyF2& f);

/// If `f` lies in the image of Sq1: Sym^2 -> Sym^3 (spanned by
/// x_i^2 x_j + x_i x_j^2), return its Alt^2 coordinates e_i ^ e_j (i < j,
/// lexicographic), else nullopt.
std::optional<std::vector<long long>> sq1_image_as_alt2(const PolyF2& f);

// -- extraspecial group elements ----------------------------------------

/**
 * The group of monomials z^i t^u (i in Z/p, u in F_p^n) with multiplication
 *   (z^i t^u)(z^j t^v) = z^{i + j + omega(u, v)} t^{u + v}
 * for a bilinear form omega given by its Gram matrix. For p = 2 a form with
 * omega(u,u) = Q(u) builds the extraspecial group classified by Q.
 */
class ExtraspecialGroup {
public:
    ExtraspecialGroup(long long p, FpMat omega_gram);

    struct Elt {
        long long z = 0;
        std::vector<long long> u;
        bool operator==(const Elt& o) const { return z == o.z && u == o.u; }
        bool operator<(const Elt& o) const { return std::tie(z, u) < std::tie(o.z, o.u); }
    };

    long long p() const { return p_; }
    int rank() const { return n_; }
    BigInt order() const;  // p^{1+n}

    Elt identity() const;
    Elt make(long long z, std::vector<long long> u) const;
    Elt mul(const Elt& a, const Elt& b) const;
    Elt inverse(const Elt& a) const;
    long long element_order(const Elt& a) const;
    long long omega(const std::vector<long long>& u, const std::vector<long long>& v) const;

    std::vector<Elt> elements() const;
    /// true iff the center is exactly the cyclic subgroup generated by z
    bool center_is_z() const;

private:
    long long p_;
    int n_;
    FpMat gram_;
};

// -- helpers --------------------------------------------------------------

/// Generating set of GL_n(F_p): a primitive-root scaling, an n-cycle
/// permutation, and a transvection.
std::vector<FpMat> gl_standard_generators(long long p, int n);

/// The standard symplectic Gram matrix on F_p^{2m}: omega(e_i, e_{m+i}) = 1.
FpMat standard_symplectic_gram(long long p, int m);

/// Orthogonal transvection x -> x + B_Q(x, v) v for Q(v) = 1 (p = 2).
FpMat orthogonal_transvection(const QuadraticForm& q, const std::vector<long long>& v);

/// Parse whitespace-separated matrix blocks (blank-line separated), '.' = 0.
std::vector<FpMat> parse_matrix_blocks(const std::string& text, long long p);
std::vector<FpMat> load_matrix_file(const std::string& path, long long p);

/// Search for a nonzero alternating form with g^T W g = a_g W for every
/// generator, trying all multiplier tuples over F_p^*; requires the solution
/// line to be unique for the reported tuple.
struct InvariantSymplectic {
    FpMat gram;
    std::vector<long long> multipliers;
};
InvariantSymplectic find_invariant_symplectic(const std::vector<FpMat>& gens);

/// A symplectic basis (a_1, b_1, ..., a_m, b_m) for a nondegenerate
/// alternating Gram matrix; columns of the result.
FpMat symplectic_basis(const FpMat& gram);

}  // namespace h4
