#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "h4/abelian.hpp"

namespace h4 {

/**
 * A divisibility fact about H^4(subject; Z)_(p). Subjects are group ids;
 * p = 0 marks an integral statement (it induces statements at every prime).
 * Facts are append-only and carry full provenance: either a rule id with the
 * input fact ids, or an external citation. Order facts bound |H^4|; exponent
 * facts bound element orders; summand facts pin direct-summand relations.
 */
struct Fact {
    enum class Kind {
        OrderDivides,
        OrderDivisibleBy,
        IsSummandOf,
        Cyclic,
        ExponentDivides,
        ExponentDivisibleBy,
        Equals,
        Note,  // coefficient-vanishing markers and similar side statements
    };

    int id = 0;
    std::string subject;
    long long p = 0;
    Kind kind = Kind::Note;
    long long value = 1;         // divides / divisible-by / exponent kinds
    AbelianGroup group_value;    // IsSummandOf / Equals
    std::string element;         // optional: which class realizes an exponent bound
    std::string provenance;      // rule id or citation
    std::vector<int> inputs;     // ids of facts this one was derived from
    bool external = false;
    std::string statement;       // free-text payload for Note facts

    static std::string kind_name(Kind k);
};

/// Outcome of a conclusion query: either a pinned isomorphism type or the
/// surviving candidate interval, always with the facts used.
struct Conclusion {
    std::string subject;
    long long p = 0;
    bool determined = false;
    std::optional<AbelianGroup> value;
    BigInt order_lower{1};
    std::optional<BigInt> order_upper;
    std::vector<AbelianGroup> candidates;  // empty when no upper bound exists
    std::vector<int> facts_used;
};

/**
 * Append-only fact store with the deduction queries. Rules never delete;
 * a contradiction (empty candidate set) raises ContradictionError naming the
 * provenances involved.
 */
class Ledger {
public:
    int add(Fact f);
    const std::vector<Fact>& facts() const { return facts_; }
    const Fact& fact(int id) const;

    /// Facts touching (subject, p), with integral facts reduced to their
    /// p-primary content.
    std::vector<Fact> primary_facts(const std::string& subject, long long p) const;

    Conclusion conclude(const std::string& subject, long long p) const;

private:
    std::vector<Fact> facts_;
};

/// Abelian p-groups of order dividing p^max_exp (pairs of (partition) groups).
std::vector<AbelianGroup> abelian_p_groups_up_to(long long p, int max_exp);

// -- case files ---------------------------------------------------------------

/**
 * Runs a case-file document: `declare` blocks introduce groups, tables,
 * Sylow containments, covers and external assertions; `apply` blocks invoke
 * rules in order. Deterministic: rerunning a case yields a byte-identical
 * report. File references are resolved against `data_dir`.
 */
struct CaseReport {
    std::string name;
    std::string json_text;  // canonical report (sorted keys, no timestamps)
    bool fully_mechanized = false;
    std::vector<Conclusion> conclusions;
};

CaseReport run_case_file(const std::string& path, const std::string& data_dir);
CaseReport run_case_text(const std::string& text, const std::string& data_dir);

}  // namespace h4
