#include "h4/ledger.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

#include "h4/chartab.hpp"
#include "h4/charclass.hpp"
#include "h4/errors.hpp"
#include "h4/specseq.hpp"

namespace h4 {

using nlohmann::json;

std::string Fact::kind_name(Kind k) {
    switch (k) {
        case Kind::OrderDivides: return "order_divides";
        case Kind::OrderDivisibleBy: return "order_divisible_by";
        case Kind::IsSummandOf: return "is_summand_of";
        case Kind::Cyclic: return "cyclic";
        case Kind::ExponentDivides: return "exponent_divides";
        case Kind::ExponentDivisibleBy: return "exponent_divisible_by";
        case Kind::Equals: return "equals";
        case Kind::Note: return "note";
    }
    return "?";
}

int Ledger::add(Fact f) {
    f.id = static_cast<int>(facts_.size());
    if (f.kind != Fact::Kind::Note && f.kind != Fact::Kind::Cyclic && f.kind != Fact::Kind::IsSummandOf &&
        f.kind != Fact::Kind::Equals && f.value <= 0)
        throw ValidationError("fact values must be positive");
    facts_.push_back(std::move(f));
    return facts_.back().id;
}

const Fact& Ledger::fact(int id) const {
    if (id < 0 || id >= static_cast<int>(facts_.size())) throw ValidationError("no such fact id");
    return facts_[id];
}

namespace {
long long p_part_of(long long v, long long p) {
    long long q = 1;
    while (v % p == 0) {
        v /= p;
        q *= p;
    }
    return q;
}
}  // namespace

std::vector<Fact> Ledger::primary_facts(const std::string& subject, long long p) const {
    std::vector<Fact> out;
    for (const Fact& f : facts_) {
        if (f.subject != subject) continue;
        if (f.p != 0 && f.p != p) continue;
        Fact g = f;
        if (f.p == 0) {
            // reduce the integral statement to its p-primary content
            switch (f.kind) {
                case Fact::Kind::OrderDivides:
                case Fact::Kind::ExponentDivides:
                    g.value = p_part_of(f.value, p);
                    break;
                case Fact::Kind::OrderDivisibleBy:
                case Fact::Kind::ExponentDivisibleBy:
                    g.value = p_part_of(f.value, p);
                    break;
                case Fact::Kind::IsSummandOf:
                case Fact::Kind::Equals:
                    g.group_value = f.group_value.primary_part(p);
                    break;
                case Fact::Kind::Cyclic:
                case Fact::Kind::Note:
                    break;
            }
            g.p = p;
        }
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<AbelianGroup> abelian_p_groups_up_to(long long p, int max_exp) {
    // all partitions of 0..max_exp with parts as p-power cyclic factors
    std::vector<AbelianGroup> out;
    std::vector<int> part;
    std::function<void(int, int)> rec = [&](int remaining, int max_part) {
        {
            std::vector<long long> orders;
            for (int e : part) {
                long long q = 1;
                for (int i = 0; i < e; ++i) q *= p;
                orders.push_back(q);
            }
            out.push_back(AbelianGroup::from_orders(orders));
        }
        for (int next = std::min(remaining, max_part); next >= 1; --next) {
            part.push_back(next);
            rec(remaining - next, next);
            part.pop_back();
        }
    };
    rec(max_exp, max_exp);
    // deduplicate (the recursion above emits each partition exactly once, but
    // be safe) and keep deterministic order: by order then lexicographic
    std::sort(out.begin(), out.end(), [](const AbelianGroup& a, const AbelianGroup& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.invariant_factors() < b.invariant_factors();
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Conclusion Ledger::conclude(const std::string& subject, long long p) const {
    std::vector<Fact> facts = primary_facts(subject, p);
    Conclusion c;
    c.subject = subject;
    c.p = p;

    std::optional<long long> order_upper;
    long long order_lower = 1;
    std::optional<long long> exp_upper;
    long long exp_lower = 1;
    bool cyclic = false;
    std::vector<AbelianGroup> summand_groups, equals_groups;

    for (const Fact& f : facts) {
        c.facts_used.push_back(f.id);
        // p-local facts are reduced to their p-primary content as well: the
        // stray prime content of a divisibility statement says nothing about
        // a p-group
        long long v = f.value > 0 ? p_part_of(f.value, p) : 1;
        switch (f.kind) {
            case Fact::Kind::OrderDivides:
                order_upper = order_upper ? std::gcd(*order_upper, v) : v;
                break;
            case Fact::Kind::OrderDivisibleBy:
                order_lower = std::lcm(order_lower, v);
                break;
            case Fact::Kind::ExponentDivides:
                exp_upper = exp_upper ? std::gcd(*exp_upper, v) : v;
                break;
            case Fact::Kind::ExponentDivisibleBy:
                exp_lower = std::lcm(exp_lower, v);
                break;
            case Fact::Kind::Cyclic:
                cyclic = true;
                break;
            case Fact::Kind::IsSummandOf: {
                if (!f.group_value.is_finite())
                    throw ValidationError("summand bounds must be finite");
                AbelianGroup part = f.group_value.primary_part(p);
                order_upper = order_upper ? std::gcd(*order_upper, part.order().to_int64())
                                          : part.order().to_int64();
                summand_groups.push_back(std::move(part));
                break;
            }
            case Fact::Kind::Equals: {
                AbelianGroup part = f.group_value.primary_part(p);
                order_upper = order_upper ? std::gcd(*order_upper, part.order().to_int64())
                                          : part.order().to_int64();
                order_lower = std::lcm(order_lower, part.order().to_int64());
                equals_groups.push_back(std::move(part));
                break;
            }
            case Fact::Kind::Note:
                break;
        }
    }

    c.order_lower = BigInt(std::max(order_lower, exp_lower));

    if (!order_upper) {
        // no finite upper bound: report the lower data only
        return c;
    }
    c.order_upper = BigInt(*order_upper);

    int max_exp = 0;
    {
        long long u = *order_upper;
        while (u % p == 0) {
            u /= p;
            ++max_exp;
        }
        if (u != 1 && *order_upper != 1)
            throw InternalError("conclude: order bound at prime " + std::to_string(p) +
                                " is not a p-power: " + std::to_string(*order_upper));
    }

    for (const AbelianGroup& g : abelian_p_groups_up_to(p, max_exp)) {
        long long order = g.order().to_int64();
        if (*order_upper % order != 0) continue;
        if (order % order_lower != 0) continue;
        long long exp = g.exponent();
        if (exp_upper && *exp_upper % exp != 0) continue;
        if (exp % exp_lower != 0) continue;
        if (cyclic && !g.is_cyclic()) continue;
        bool ok = true;
        for (const AbelianGroup& bound : summand_groups)
            if (!g.is_summand_of(bound)) ok = false;
        for (const AbelianGroup& eq : equals_groups)
            if (!(g == eq)) ok = false;
        if (ok) c.candidates.push_back(g);
    }

    if (c.candidates.empty()) {
        std::ostringstream os;
        os << "contradictory facts about H^4(" << subject << ")_(" << p << "):";
        for (const Fact& f : facts)
            if (f.kind != Fact::Kind::Note)
                os << " [#" << f.id << " " << Fact::kind_name(f.kind) << " via " << f.provenance << "]";
        throw ContradictionError(os.str());
    }

    // tightened order interval from the survivors
    BigInt lo = c.candidates.front().order(), hi = lo;
    for (const AbelianGroup& g : c.candidates) {
        if (g.order() < lo) lo = g.order();
        if (hi < g.order()) hi = g.order();
    }
    c.order_lower = lo;
    c.order_upper = hi;
    if (c.candidates.size() == 1) {
        c.determined = true;
        c.value = c.candidates.front();
    }
    return c;
}

// -- case runner ---------------------------------------------------------------

namespace {

struct CoverDecl {
    std::string base, cover;
    long long n = 1, p = 2;
    AbelianGroup h2_base_p;
};

struct ScaledElementDecl {
    std::string subject;
    std::string element;
    long long k = 1;
    std::string via;
};

struct CaseState {
    Ledger ledger;
    std::string data_dir;
    json report_facts = json::array();
    json report_conclusions = json::array();
    std::vector<Conclusion> conclusions;
    int external_count = 0;

    std::map<std::string, long long> group_orders;
    std::map<std::string, std::string> tables;                     // group -> file
    std::set<std::pair<std::string, std::string>> sylow_in;        // (group, subgroup) tagged with p in key
    std::map<std::string, std::string> sylow_shape;                // "group@p" -> "p" | "pxp"
    std::map<std::string, CoverDecl> covers;                       // cover id -> decl
    std::set<std::string> injections;                              // "from>to@p"
    std::map<std::string, std::map<std::string, long long>> decompositions;
    std::map<std::string, std::pair<long long, std::map<std::string, long long>>> chern_formulas;
    std::map<std::string, ScaledElementDecl> scaled_elements;
    std::map<std::string, long long> class_count_at_most;          // "group@order" -> count

    CharacterTable load_table(const std::string& group) {
        auto it = tables.find(group);
        if (it == tables.end()) throw ValidationError("no table declared for group " + group);
        return CharacterTable::load_file(data_dir + "/" + it->second);
    }

    int record(Fact f) {
        int id = ledger.add(std::move(f));
        const Fact& g = ledger.fact(id);
        json jf;
        jf["id"] = g.id;
        jf["subject"] = g.subject;
        jf["p"] = g.p;
        jf["kind"] = Fact::kind_name(g.kind);
        if (g.kind == Fact::Kind::IsSummandOf || g.kind == Fact::Kind::Equals)
            jf["group"] = g.group_value.to_string();
        else if (g.kind != Fact::Kind::Note && g.kind != Fact::Kind::Cyclic)
            jf["value"] = g.value;
        if (!g.element.empty()) jf["element"] = g.element;
        if (!g.statement.empty()) jf["statement"] = g.statement;
        jf["provenance"] = g.provenance;
        jf["inputs"] = g.inputs;
        jf["external"] = g.external;
        report_facts.push_back(jf);
        if (g.external) ++external_count;
        return id;
    }
};

AbelianGroup group_from_factors(const json& arr) {
    std::vector<long long> orders;
    for (const auto& v : arr) orders.push_back(v.get<long long>());
    return AbelianGroup::from_orders(orders);
}

Fact::Kind kind_from_name(const std::string& name) {
    if (name == "order_divides") return Fact::Kind::OrderDivides;
    if (name == "order_divisible_by") return Fact::Kind::OrderDivisibleBy;
    if (name == "is_summand_of") return Fact::Kind::IsSummandOf;
    if (name == "cyclic") return Fact::Kind::Cyclic;
    if (name == "exponent_divides") return Fact::Kind::ExponentDivides;
    if (name == "exponent_divisible_by") return Fact::Kind::ExponentDivisibleBy;
    if (name == "equals") return Fact::Kind::Equals;
    throw ValidationError("unknown fact kind: " + name);
}

void handle_declare(CaseState& st, const json& d) {
    std::string kind = d.at("kind").get<std::string>();
    if (kind == "group") {
        st.group_orders[d.at("id").get<std::string>()] = d.value("order", 0LL);
    } else if (kind == "table") {
        st.tables[d.at("group").get<std::string>()] = d.at("file").get<std::string>();
    } else if (kind == "sylow-in") {
        st.sylow_in.insert({d.at("group").get<std::string>() + "@" + std::to_string(d.at("p").get<long long>()),
                            d.at("subgroup").get<std::string>()});
    } else if (kind == "sylow-shape") {
        st.sylow_shape[d.at("group").get<std::string>() + "@" + std::to_string(d.at("p").get<long long>())] =
            d.at("shape").get<std::string>();
    } else if (kind == "cover-of") {
        CoverDecl c;
        c.base = d.at("base").get<std::string>();
        c.cover = d.at("cover").get<std::string>();
        c.n = d.at("n").get<long long>();
        c.p = d.at("p").get<long long>();
        c.h2_base_p = group_from_factors(d.at("h2_base_p"));
        st.covers[c.cover + "@" + std::to_string(c.p)] = c;
    } else if (kind == "injects-into") {
        st.injections.insert(d.at("from").get<std::string>() + ">" + d.at("to").get<std::string>() + "@" +
                             std::to_string(d.at("p").get<long long>()));
        Fact f;
        f.subject = d.at("to").get<std::string>();
        f.kind = Fact::Kind::Note;
        f.statement = "the pullback from " + d.at("from").get<std::string>() + " is injective at p = " +
                      std::to_string(d.at("p").get<long long>());
        f.provenance = "external: " + d.at("justification").get<std::string>();
        f.external = true;
        st.record(std::move(f));
    } else if (kind == "decomposition") {
        std::map<std::string, long long> coeffs;
        std::string desc;
        for (auto it = d.at("coefficients").begin(); it != d.at("coefficients").end(); ++it) {
            coeffs[it.key()] = it.value().get<long long>();
            desc += (desc.empty() ? "" : " + ") + std::to_string(it.value().get<long long>()) + " " + it.key();
        }
        st.decompositions[d.at("id").get<std::string>()] = coeffs;
        Fact f;
        f.subject = d.at("id").get<std::string>();
        f.kind = Fact::Kind::Note;
        f.statement = "restriction decomposition " + desc;
        f.provenance = "external: " + d.at("source").get<std::string>();
        f.external = true;
        st.record(std::move(f));
    } else if (kind == "note") {
        Fact f;
        f.subject = d.at("subject").get<std::string>();
        f.kind = Fact::Kind::Note;
        f.statement = d.at("statement").get<std::string>();
        f.provenance = "external: " + d.at("source").get<std::string>();
        f.external = true;
        st.record(std::move(f));
    } else if (kind == "chern-formula") {
        std::map<std::string, long long> terms;
        for (auto it = d.at("terms").begin(); it != d.at("terms").end(); ++it)
            terms[it.key()] = it.value().get<long long>();
        st.chern_formulas[d.at("id").get<std::string>()] = {d.at("modulus").get<long long>(), terms};
        Fact f;
        f.subject = d.at("id").get<std::string>();
        f.kind = Fact::Kind::Note;
        f.statement = "external degree-4 Chern formula, modulus " + std::to_string(d.at("modulus").get<long long>());
        f.provenance = d.at("source").get<std::string>();
        f.external = true;
        st.record(std::move(f));
    } else if (kind == "scaled-element") {
        ScaledElementDecl s;
        s.subject = d.at("subject").get<std::string>();
        s.element = d.at("element").get<std::string>();
        s.k = d.at("k").get<long long>();
        s.via = d.at("via").get<std::string>();
        Fact f;
        f.subject = s.subject;
        f.kind = Fact::Kind::Note;
        f.statement = "element relation: " + s.element + " scaled by " + std::to_string(s.k) + " (" + s.via + ")";
        f.provenance = d.at("source").get<std::string>();
        f.external = true;
        st.record(std::move(f));
        st.scaled_elements[d.at("id").get<std::string>()] = s;
    } else if (kind == "class-count") {
        st.class_count_at_most[d.at("group").get<std::string>() + "@" +
                               std::to_string(d.at("element_order").get<long long>())] =
            d.at("at_most").get<long long>();
        Fact f;
        f.subject = d.at("group").get<std::string>();
        f.kind = Fact::Kind::Note;
        f.statement = "at most " + std::to_string(d.at("at_most").get<long long>()) + " classes of order " +
                      std::to_string(d.at("element_order").get<long long>());
        f.provenance = d.at("source").get<std::string>();
        f.external = true;
        st.record(std::move(f));
    } else if (kind == "assert-external") {
        Fact f;
        f.subject = d.at("subject").get<std::string>();
        f.p = d.value("p", 0LL);
        f.kind = kind_from_name(d.at("fact").get<std::string>());
        if (f.kind == Fact::Kind::IsSummandOf || f.kind == Fact::Kind::Equals)
            f.group_value = group_from_factors(d.at("group_value"));
        else if (f.kind != Fact::Kind::Cyclic)
            f.value = d.at("value").get<long long>();
        f.provenance = "external: " + d.at("source").get<std::string>();
        f.external = true;
        st.record(std::move(f));
    } else if (kind == "spin-structure") {
        Fact f;
        f.subject = d.at("subject").get<std::string>();
        f.kind = Fact::Kind::Note;
        f.statement = "the representation " + d.at("representation").get<std::string>() +
                      " admits a spin structure over " + f.subject;
        f.provenance = "external: " + d.at("source").get<std::string>();
        f.external = true;
        st.record(std::move(f));
    } else {
        throw ValidationError("unknown declare kind: " + kind);
    }
}

void rule_class_lower_bound(CaseState& st, const json& a) {
    std::string subject = a.at("subject").get<std::string>();
    long long p = a.at("p").get<long long>();
    std::string table_group = a.value("table_group", subject);
    CharacterTable t = st.load_table(table_group);
    const Character& chi = t.character(a.at("character").get<std::string>());
    int cls = t.class_index(a.at("class").get<std::string>());
    Spectrum s = t.eigenvalue_spectrum(chi, cls);
    std::string method = a.at("method").get<std::string>();
    long long order = 0;
    std::string element;
    if (method == "chern") {
        ChernPair cp = chern_restriction(s);
        order = H4Class{cp.modulus, cp.c2}.order();
        element = "c2(" + chi.label + ")";
    } else if (method == "phalf") {
        HalfPontryagin hp = phalf_restriction(s, a.at("lift_order").get<long long>());
        order = hp.value.order();
        element = "p1/2(" + chi.label + ")";
    } else {
        throw ValidationError("class_lower_bound: method must be chern or phalf");
    }
    long long op = p_part_of(order, p);
    if (op <= 1) return;  // trivial restriction: no fact
    Fact f;
    f.subject = subject;
    f.p = p;
    f.kind = Fact::Kind::ExponentDivisibleBy;
    f.value = op;
    f.element = element;
    f.provenance = "rule:class_lower_bound " + method + " " + chi.label + "@" +
                   t.classes()[cls].name + " on " + t.group_name();
    st.record(f);
    Fact g = f;
    g.kind = Fact::Kind::OrderDivisibleBy;
    g.inputs = {f.id};
    st.record(std::move(g));
}

void rule_summand(CaseState& st, const json& a) {
    std::string group = a.at("group").get<std::string>();
    std::string sub = a.at("subgroup").get<std::string>();
    long long p = a.at("p").get<long long>();
    if (!st.sylow_in.count({group + "@" + std::to_string(p), sub}))
        throw ValidationError("rule summand: no declared Sylow containment of " + group + " in " + sub +
                              " at p = " + std::to_string(p));
    Conclusion sc = st.ledger.conclude(sub, p);
    if (!sc.determined)
        throw ValidationError("rule summand: H^4(" + sub + ")_(" + std::to_string(p) +
                              ") is not pinned in the ledger");
    AbelianGroup bound = *sc.value;

    Fact f;
    f.subject = group;
    f.p = p;
    f.kind = Fact::Kind::IsSummandOf;
    f.group_value = bound;
    f.provenance = "rule:summand restriction to " + sub + " containing a " + std::to_string(p) + "-Sylow";
    f.inputs = sc.facts_used;
    int fid = st.record(f);
    Fact e;
    e.subject = group;
    e.p = p;
    e.kind = Fact::Kind::ExponentDivides;
    e.value = bound.is_trivial() ? 1 : bound.exponent();
    e.provenance = "rule:summand exponent bound via " + sub;
    e.inputs = {fid};
    st.record(e);
    if (bound.is_cyclic()) {
        Fact cyc;
        cyc.subject = group;
        cyc.p = p;
        cyc.kind = Fact::Kind::Cyclic;
        cyc.provenance = "rule:summand cyclic bound via " + sub;
        cyc.inputs = {fid};
        st.record(cyc);
    }
}

void rule_large_primes(CaseState& st, const json& a) {
    std::string subject = a.at("subject").get<std::string>();
    long long p = a.at("p").get<long long>();
    auto shape_it = st.sylow_shape.find(subject + "@" + std::to_string(p));
    if (shape_it == st.sylow_shape.end())
        throw ValidationError("rule large_primes: Sylow shape of " + subject + " at " + std::to_string(p) +
                              " not declared");
    if (shape_it->second != "p" && shape_it->second != "pxp")
        throw ValidationError("rule large_primes: Sylow must be Z/p or Z/p x Z/p");
    long long count = -1;
    std::string count_src;
    if (a.contains("table_group") || st.tables.count(subject)) {
        CharacterTable t = st.load_table(a.value("table_group", subject));
        count = static_cast<long long>(t.classes_of_order(p).size());
        count_src = "computed from the table of " + t.group_name();
    } else {
        auto it = st.class_count_at_most.find(subject + "@" + std::to_string(p));
        if (it == st.class_count_at_most.end())
            throw ValidationError("rule large_primes: no table or class-count declaration for " + subject);
        count = it->second;
        count_src = "declared class-count bound";
    }
    if (!(2 * count < p - 1)) return;  // criterion inapplicable: abstain
    Fact f;
    f.subject = subject;
    f.p = p;
    f.kind = Fact::Kind::Equals;
    f.group_value = AbelianGroup::trivial();
    f.provenance = "rule:large_primes " + std::to_string(count) + " classes of order " + std::to_string(p) +
                   " < (p-1)/2, Sylow shape " + shape_it->second + " (" + count_src + ")";
    st.record(std::move(f));
}

void rule_central_character(CaseState& st, const json& a) {
    std::string subject = a.at("subject").get<std::string>();
    long long p = a.at("p").get<long long>();
    long long center = a.at("center_order").get<long long>();
    if (p == 2) return;  // vacuous at p = 2: abstain
    if (std::gcd(center, p) != 1)
        throw ValidationError("rule central_character: center order must be prime to p");
    if (!a.contains("nontrivial_source"))
        throw ValidationError("rule central_character: the nontrivial-character hypothesis needs provenance");
    std::string degrees;
    for (const auto& j : a.at("degrees")) degrees += (degrees.empty() ? "" : ",") + std::to_string(j.get<int>());
    Fact f;
    f.subject = subject;
    f.p = p;
    f.kind = Fact::Kind::Note;
    f.statement = "all H^i(J; H^j(E)) vanish for j in {" + degrees + "}: the center (order " +
                  std::to_string(center) + ") acts through a nontrivial character";
    f.provenance = "rule:central_character (" + a.at("nontrivial_source").get<std::string>() + ")";
    st.record(std::move(f));
}

void rule_page_bound(CaseState& st, const json& a) {
    std::string subject = a.at("subject").get<std::string>();
    long long p = a.at("p").get<long long>();
    Page page = Page::load_file(st.data_dir + "/" + a.at("page").get<std::string>());
    int turns = 0;
    if (a.value("turn", "") == std::string("schur")) {
        long long n = a.at("n").get<long long>(), N = a.at("N").get<long long>();
        page = turn_page(page, schur_cover_d3(n, N));
        ++turns;
    }
    Degree4Interval iv = degree4_interval(page);
    BigInt upper_p(1), lower_p(1);
    for (int i = 0; i <= 4; ++i) {
        const PageCell& c = page.cell(i, 4 - i);
        if (c.unknown) throw ValidationError("page bound: unknown cell in total degree 4");
        upper_p *= c.group.primary_part(p).order();
    }
    // lower bound: untouchable-cell analysis restricted to the p-part, and
    // exponents of untouchable cells bound the exponent from below
    long long exp_lower = 1;
    for (int i = 0; i <= 4; ++i) {
        int j = 4 - i;
        const PageCell& c = page.cell(i, j);
        AbelianGroup part = c.group.is_finite() ? c.group.primary_part(p) : AbelianGroup::trivial();
        if (part.is_trivial()) continue;
        // scan every page from r = 2: unresolved earlier differentials count
        bool untouchable = true;
        for (int r = 2; r <= Page::kMaxTotal + 1 && untouchable; ++r) {
            if (j - r + 1 >= 0 && !page.is_zero(i + r, j - r + 1)) untouchable = false;
            if (i - r >= 0 && !page.is_zero(i - r, j + r - 1)) untouchable = false;
        }
        if (untouchable) {
            lower_p *= part.order();
            exp_lower = std::lcm(exp_lower, part.exponent());
        }
    }
    (void)iv;
    std::string page_name = page.name().empty() ? a.at("page").get<std::string>() : page.name();
    Fact up;
    up.subject = subject;
    up.p = p;
    up.kind = Fact::Kind::OrderDivides;
    up.value = upper_p.to_int64();
    up.provenance = "rule:page_bound upper at page " + std::to_string(page.page_number()) + " of " + page_name;
    int up_id = st.record(up);
    if (!lower_p.is_one()) {
        Fact lo;
        lo.subject = subject;
        lo.p = p;
        lo.kind = Fact::Kind::OrderDivisibleBy;
        lo.value = lower_p.to_int64();
        lo.provenance = "rule:page_bound surviving cells of " + page_name;
        lo.inputs = {up_id};
        st.record(lo);
        Fact ex;
        ex.subject = subject;
        ex.p = p;
        ex.kind = Fact::Kind::ExponentDivisibleBy;
        ex.value = p_part_of(exp_lower, p);
        ex.provenance = "rule:page_bound exponent of surviving cells of " + page_name;
        ex.inputs = {up_id};
        if (ex.value > 1) st.record(ex);
    }
    (void)turns;
}

void rule_cover(CaseState& st, const json& a) {
    std::string cover = a.at("cover").get<std::string>();
    long long p = a.at("p").get<long long>();
    auto it = st.covers.find(cover + "@" + std::to_string(p));
    if (it == st.covers.end())
        throw ValidationError("rule cover: no declared cover " + cover + " at p = " + std::to_string(p));
    const CoverDecl& cd = it->second;
    // copy out of the fact store: recording below reallocates it
    std::optional<Fact> base_fact;
    for (const Fact& f : st.ledger.facts())
        if (f.subject == cd.base && f.kind == Fact::Kind::Equals && (f.p == 0 || f.p == p)) base_fact = f;
    if (!base_fact) throw ValidationError("rule cover: H^4(" + cd.base + ") is not known to the ledger");
    AbelianGroup base_h4 = base_fact->p == 0 ? base_fact->group_value.primary_part(p) : base_fact->group_value;

    CoverBound cb = cover_cokernel_bound(p, cd.h2_base_p, cd.n);
    long long base_order = base_h4.order().to_int64();

    Fact up;
    up.subject = cover;
    up.p = p;
    up.kind = Fact::Kind::OrderDivides;
    up.value = base_order * cb.divisor;
    up.provenance = "rule:cover pullback injection with cokernel dividing " + std::to_string(cb.divisor) +
                    " (central " + std::to_string(cd.n) + "-cover of " + cd.base + ")";
    up.inputs = {base_fact->id};
    st.record(up);
    if (base_order > 1) {
        Fact lo;
        lo.subject = cover;
        lo.p = p;
        lo.kind = Fact::Kind::OrderDivisibleBy;
        lo.value = base_order;
        lo.provenance = "rule:cover injectivity of the pullback from " + cd.base;
        lo.inputs = {base_fact->id};
        st.record(lo);
        Fact ex;
        ex.subject = cover;
        ex.p = p;
        ex.kind = Fact::Kind::ExponentDivisibleBy;
        ex.value = base_h4.exponent();
        ex.provenance = "rule:cover exponent transfer from " + cd.base;
        ex.inputs = {base_fact->id};
        st.record(ex);
    }
}

void rule_transfer_lower(CaseState& st, const json& a) {
    std::string from = a.at("from").get<std::string>();
    std::string to = a.at("to").get<std::string>();
    long long p = a.at("p").get<long long>();
    if (!st.injections.count(from + ">" + to + "@" + std::to_string(p)))
        throw ValidationError("rule transfer_lower: no declared injection " + from + " -> " + to);
    std::vector<Fact> moved;
    for (const Fact& f : st.ledger.facts()) {
        if (f.subject != from || f.p != p) continue;
        if (f.kind != Fact::Kind::OrderDivisibleBy && f.kind != Fact::Kind::ExponentDivisibleBy) continue;
        Fact g = f;
        g.subject = to;
        g.inputs = {f.id};
        g.external = false;
        g.provenance = "rule:transfer_lower along the injection " + from + " -> " + to;
        moved.push_back(std::move(g));
    }
    for (Fact& g : moved) st.record(std::move(g));
}

void rule_scaled_class(CaseState& st, const json& a) {
    std::string subject = a.at("subject").get<std::string>();
    long long p = a.at("p").get<long long>();
    long long k = a.at("k").get<long long>();
    long long r = a.at("r").get<long long>();
    // current exponent upper bound
    std::optional<long long> exp_upper;
    std::vector<int> inputs;
    for (const Fact& f : st.ledger.primary_facts(subject, p)) {
        long long cand = 0;
        if (f.kind == Fact::Kind::ExponentDivides) cand = f.value;
        if (f.kind == Fact::Kind::OrderDivides) cand = f.value;  // exponent divides order
        if (f.kind == Fact::Kind::Equals) cand = f.group_value.is_trivial() ? 1 : f.group_value.exponent();
        if (cand) {
            exp_upper = exp_upper ? std::gcd(*exp_upper, cand) : cand;
            inputs.push_back(f.id);
        }
    }
    if (!exp_upper)
        throw ValidationError("rule scaled_class: no exponent upper bound available for " + subject);
    // candidate element orders d | exp_upper with ord(k * beta) = d / gcd(d, k)
    // divisible by the observed restriction order r
    long long g = 0;
    for (long long d = 1; d <= *exp_upper; ++d) {
        if (*exp_upper % d) continue;
        long long ord_kd = d / std::gcd(d, std::abs(k));
        if (ord_kd % r) continue;
        g = g ? std::gcd(g, d) : d;
    }
    if (!g)
        throw ContradictionError("rule scaled_class: no element order is compatible with the scaled restriction");
    Fact f;
    f.subject = subject;
    f.p = p;
    f.kind = Fact::Kind::ExponentDivisibleBy;
    f.value = g;
    f.element = a.value("element", "");
    f.provenance = "rule:scaled_class k = " + std::to_string(k) + ", restriction order divisible by " +
                   std::to_string(r);
    f.inputs = inputs;
    st.record(f);
}

void rule_chern_formula(CaseState& st, const json& a) {
    std::string subject = a.at("subject").get<std::string>();
    long long p = a.at("p").get<long long>();
    const auto& formula = st.chern_formulas.at(a.at("formula").get<std::string>());
    const auto& decomp = st.decompositions.at(a.at("decomposition").get<std::string>());
    long long modulus = formula.first;
    BigInt acc(0);
    for (const auto& [label, coeff] : formula.second) {
        auto it = decomp.find(label);
        long long mult = it == decomp.end() ? 0 : it->second;
        acc += BigInt(coeff) * BigInt(mult);
    }
    long long value = acc.mod_euclid(BigInt(modulus)).to_int64();
    long long order = H4Class{modulus, value}.order();
    long long op = p_part_of(order, p);
    if (op <= 1) return;
    Fact f;
    f.subject = subject;
    f.p = p;
    f.kind = Fact::Kind::ExponentDivisibleBy;
    f.value = op;
    f.element = a.value("element", "");
    f.provenance = "rule:chern_formula value " + std::to_string(value) + " mod " + std::to_string(modulus) +
                   " has order " + std::to_string(order) + " on the binary dihedral subgroup";
    st.record(f);
    Fact g = f;
    g.kind = Fact::Kind::OrderDivisibleBy;
    g.inputs = {f.id};
    st.record(std::move(g));
}

void rule_assemble(CaseState& st, const json& a) {
    std::string target = a.at("target").get<std::string>();
    std::string base = a.at("base").get<std::string>();
    long long n = a.at("n").get<long long>();
    // base must be integrally known; copy, since recording reallocates the store
    std::optional<Fact> base_fact;
    for (const Fact& f : st.ledger.facts())
        if (f.subject == base && f.kind == Fact::Kind::Equals && f.p == 0) base_fact = f;
    if (!base_fact) throw ValidationError("rule assemble: integral H^4(" + base + ") unknown");

    std::set<long long> part_primes;
    for (const auto& part : a.at("parts")) {
        std::string g = part.at(0).get<std::string>();
        long long p = part.at(1).get<long long>();
        part_primes.insert(p);
        if (n % p != 0)
            throw ValidationError("rule assemble: part prime does not divide the cover degree");
        Conclusion c = st.ledger.conclude(g, p);
        if (!c.determined)
            throw ValidationError("rule assemble: H^4(" + g + ")_(" + std::to_string(p) +
                                  ") is not pinned yet");
        Fact f;
        f.subject = target;
        f.p = p;
        f.kind = Fact::Kind::Equals;
        f.group_value = *c.value;
        f.provenance = "rule:assemble p-part from " + g + " (central kernels prime to p do not change p-primary cohomology)";
        f.inputs = c.facts_used;
        st.record(std::move(f));
    }
    // remaining primes: the p-part agrees with the base
    long long order = st.group_orders.count(target) ? st.group_orders[target] : 0;
    if (order > 0) {
        for (auto [p, e] : factorize(order)) {
            if (part_primes.count(p)) continue;
            Fact f;
            f.subject = target;
            f.p = p;
            f.kind = Fact::Kind::Equals;
            f.group_value = base_fact->group_value.primary_part(p);
            f.provenance = "rule:assemble inflation isomorphism from " + base + " at a prime not dividing " +
                           std::to_string(n);
            f.inputs = {base_fact->id};
            st.record(std::move(f));
        }
    }
}

void run_conclude(CaseState& st, const json& a) {
    std::string subject = a.at("subject").get<std::string>();
    long long p = a.at("p").get<long long>();
    json jc;
    if (p != 0) {
        Conclusion c = st.ledger.conclude(subject, p);
        st.conclusions.push_back(c);
        jc["subject"] = c.subject;
        jc["p"] = c.p;
        jc["status"] = c.determined ? "equals" : "interval";
        if (c.determined) jc["value"] = c.value->to_string();
        jc["order_lower"] = c.order_lower.to_string();
        if (c.order_upper) jc["order_upper"] = c.order_upper->to_string();
        json cands = json::array();
        for (const AbelianGroup& g : c.candidates) cands.push_back(g.to_string());
        jc["candidates"] = cands;
        jc["derivation"] = c.facts_used;
    } else {
        // integral conclusion: direct sum over every prime of the group order
        long long order = st.group_orders.count(subject) ? st.group_orders[subject] : 0;
        if (order <= 0)
            throw ValidationError("conclude: integral conclusion needs the declared order of " + subject);
        AbelianGroup total = AbelianGroup::trivial();
        json parts = json::array();
        std::vector<int> used;
        bool all_determined = true;
        for (auto [p2, e] : factorize(order)) {
            Conclusion c = st.ledger.conclude(subject, p2);
            used.insert(used.end(), c.facts_used.begin(), c.facts_used.end());
            if (!c.determined) {
                all_determined = false;
                continue;
            }
            total = total.direct_sum(*c.value);
            json part;
            part["p"] = p2;
            part["value"] = c.value->to_string();
            parts.push_back(part);
        }
        if (!all_determined)
            throw ValidationError("conclude: some primary part of " + subject + " is not pinned");
        Conclusion c;
        c.subject = subject;
        c.p = 0;
        c.determined = true;
        c.value = total;
        c.order_lower = total.order();
        c.order_upper = total.order();
        c.facts_used = used;
        st.conclusions.push_back(c);
        jc["subject"] = subject;
        jc["p"] = 0;
        jc["status"] = "equals";
        jc["value"] = total.to_string();
        jc["parts"] = parts;
        jc["derivation"] = used;
    }
    st.report_conclusions.push_back(jc);
}

}  // namespace

CaseReport run_case_text(const std::string& text, const std::string& data_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("case file is not valid JSON: ") + e.what());
    }
    CaseState st;
    st.data_dir = data_dir;
    for (const auto& d : doc.value("declares", json::array())) handle_declare(st, d);
    for (const auto& a : doc.value("applies", json::array())) {
        std::string rule = a.at("rule").get<std::string>();
        if (rule == "class_lower_bound")
            rule_class_lower_bound(st, a);
        else if (rule == "summand")
            rule_summand(st, a);
        else if (rule == "large_primes")
            rule_large_primes(st, a);
        else if (rule == "central_character")
            rule_central_character(st, a);
        else if (rule == "page_bound")
            rule_page_bound(st, a);
        else if (rule == "cover")
            rule_cover(st, a);
        else if (rule == "transfer_lower")
            rule_transfer_lower(st, a);
        else if (rule == "scaled_class")
            rule_scaled_class(st, a);
        else if (rule == "chern_formula")
            rule_chern_formula(st, a);
        else if (rule == "assemble")
            rule_assemble(st, a);
        else if (rule == "conclude")
            run_conclude(st, a);
        else
            throw ValidationError("unknown rule: " + rule);
    }

    json report;
    report["case"] = doc.value("case", "");
    report["facts"] = st.report_facts;
    report["conclusions"] = st.report_conclusions;
    report["external_assertions"] = st.external_count;
    report["fully_mechanized"] = st.external_count == 0;

    CaseReport out;
    out.name = doc.value("case", "");
    out.json_text = report.dump(2) + "\n";
    out.fully_mechanized = st.external_count == 0;
    out.conclusions = st.conclusions;
    return out;
}

CaseReport run_case_file(const std::string& path, const std::string& data_dir) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open case file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return run_case_text(ss.str(), data_dir);
}

}  // namespace h4
