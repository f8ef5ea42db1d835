#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "h4/charclass.hpp"
#include "h4/cyclotomic.hpp"

namespace h4 {

struct ClassData {
    std::string name;          // "8a": numeric part is the element order
    long long element_order = 1;
    long long class_size = 0;  // 0 = unknown (allowed in partial tables only)
};

struct Character {
    std::string label;
    long long degree = 0;
    std::vector<CycInt> values;  // one per class, table order
    bool irreducible = true;
};

/**
 * A character table: conjugacy classes with power maps, exact cyclotomic
 * character values, and optional fusion maps into other tables.
 *
 * Full tables are validated on load (class sizes sum to the group order,
 * column orthogonality for every pair of classes, power maps consistent with
 * element orders); rejection is total. Tables flagged `partial` carry only
 * the classes needed for specific restrictions and skip the global checks.
 * Tables are immutable after load and safe to query concurrently.
 */
class CharacterTable {
public:
    static CharacterTable load_file(const std::string& path);
    static CharacterTable load_json_text(const std::string& text);
    /// Cyclic group of order n with all linear characters and power maps for
    /// every prime < n (so every power of every class is reachable).
    static CharacterTable cyclic(long long n);

    const std::string& group_name() const { return name_; }
    const BigInt& group_order() const { return order_; }
    bool partial() const { return partial_; }

    const std::vector<ClassData>& classes() const { return classes_; }
    const std::vector<Character>& characters() const { return chars_; }

    int class_index(const std::string& name) const;       // throws if absent
    const Character& character(const std::string& label) const;

    /// All classes of the given element order, in table order.
    std::vector<std::string> classes_of_order(long long n) const;

    /// Class of g^k for g in the given class, chased through power maps.
    int power_class(int class_idx, long long k) const;

    /// chi(g^k).
    CycInt power_value(const Character& chi, int class_idx, long long k) const;

    /// Exact eigenvalue multiplicities of a class acting in a representation,
    /// recovered by the finite Fourier transform
    ///     m_j = (1/n) sum_k chi(g^k) zeta_n^{-jk},
    /// with every multiplicity checked to be a nonnegative rational integer
    /// and the reconstruction sum_j m_j zeta^{jk} = chi(g^k) verified for all k.
    Spectrum eigenvalue_spectrum(const Character& chi, int class_idx) const;

    /// Frobenius-Schur indicator (1/|G|) sum over classes of |class| chi(g^2);
    /// must come out +1, 0 or -1. Requires a full table.
    int fs_indicator(const Character& chi) const;

    const std::map<std::string, std::vector<int>>& fusions() const { return fusions_; }

    /// Check the named fusion map against the target table: element orders of
    /// fused classes must match. Deeper fusion consistency (centralizer
    /// divisibility, character restriction) is out of reach without group
    /// elements and is deliberately not claimed.
    void validate_fusion_into(const std::string& name, const CharacterTable& target) const;

private:
    std::string name_;
    BigInt order_;
    bool partial_ = false;
    std::vector<ClassData> classes_;
    std::map<long long, std::vector<int>> power_maps_;  // prime -> class index map
    std::vector<Character> chars_;
    std::map<std::string, std::vector<int>> fusions_;
    std::map<std::string, int> class_lookup_;
    std::map<std::string, int> char_lookup_;

    void validate();
    void validate_orthogonality() const;
};

/// Document text of the cyclic-group table of order n (what `cyclic` loads);
/// used to materialize the bundled C_n fixtures.
std::string cyclic_table_json(long long n);

}  // namespace h4
