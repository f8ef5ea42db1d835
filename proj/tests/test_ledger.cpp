#include "doctest.h"

#include "h4/errors.hpp"
#include "h4/ledger.hpp"
#include "h4/oracle.hpp"

using namespace h4;

static std::string data_dir = H4_DATA_DIR;

namespace {
const Conclusion* find_conclusion(const CaseReport& r, const std::string& subject, long long p) {
    for (const Conclusion& c : r.conclusions)
        if (c.subject == subject && c.p == p) return &c;
    return nullptr;
}
}  // namespace

TEST_CASE("fact store is append-only with provenance") {
    Ledger led;
    Fact f;
    f.subject = "G";
    f.p = 2;
    f.kind = Fact::Kind::OrderDivides;
    f.value = 8;
    f.provenance = "test";
    int id = led.add(f);
    CHECK(led.fact(id).value == 8);
    CHECK(led.facts().size() == 1);
}

TEST_CASE("conclude pins unique candidates") {
    Ledger led;
    Fact up{0, "G", 2, Fact::Kind::OrderDivides, 8, {}, "", "a", {}, false, ""};
    Fact lo{0, "G", 2, Fact::Kind::ExponentDivisibleBy, 8, {}, "", "b", {}, false, ""};
    led.add(up);
    led.add(lo);
    Conclusion c = led.conclude("G", 2);
    REQUIRE(c.determined);
    CHECK(c.value->to_string() == "8");
}

TEST_CASE("summand facts cut candidates exactly like the Sylow squeeze") {
    Ledger led;
    Fact a{0, "G", 2, Fact::Kind::IsSummandOf, 1, AbelianGroup::from_orders({2, 8}), "", "x", {}, false, ""};
    Fact b{0, "G", 2, Fact::Kind::IsSummandOf, 1, AbelianGroup::from_orders({2, 4}), "", "y", {}, false, ""};
    led.add(a);
    led.add(b);
    Conclusion c = led.conclude("G", 2);
    CHECK_FALSE(c.determined);
    REQUIRE(c.candidates.size() == 2);
    CHECK(c.candidates[0].is_trivial());
    CHECK(c.candidates[1].to_string() == "2");
    CHECK(c.order_upper->to_int64() == 2);
}

TEST_CASE("integral facts reduce to primary parts") {
    Ledger led;
    Fact f{0, "G", 0, Fact::Kind::OrderDivides, 24, {}, "", "x", {}, false, ""};
    led.add(f);
    Conclusion c2 = led.conclude("G", 2);
    CHECK(c2.order_upper->to_int64() == 8);
    Conclusion c3 = led.conclude("G", 3);
    CHECK(c3.order_upper->to_int64() == 3);
    Conclusion c5 = led.conclude("G", 5);
    REQUIRE(c5.determined);
    CHECK(c5.value->is_trivial());
}

TEST_CASE("contradictions halt with both provenances") {
    Ledger led;
    Fact up{0, "G", 2, Fact::Kind::OrderDivides, 4, {}, "", "upper-source", {}, false, ""};
    Fact lo{0, "G", 2, Fact::Kind::OrderDivisibleBy, 8, {}, "", "lower-source", {}, false, ""};
    led.add(up);
    led.add(lo);
    CHECK_THROWS_WITH_AS(led.conclude("G", 2), doctest::Contains("upper-source"), ContradictionError);
    try {
        led.conclude("G", 2);
    } catch (const ContradictionError& e) {
        CHECK(std::string(e.what()).find("lower-source") != std::string::npos);
    }
}

TEST_CASE("monotonicity: adding facts never widens conclusions") {
    Ledger led;
    led.add(Fact{0, "G", 2, Fact::Kind::OrderDivides, 16, {}, "", "a", {}, false, ""});
    Conclusion before = led.conclude("G", 2);
    led.add(Fact{0, "G", 2, Fact::Kind::ExponentDivides, 4, {}, "", "b", {}, false, ""});
    Conclusion mid = led.conclude("G", 2);
    led.add(Fact{0, "G", 2, Fact::Kind::OrderDivisibleBy, 8, {}, "", "c", {}, false, ""});
    Conclusion after = led.conclude("G", 2);
    CHECK(mid.candidates.size() <= before.candidates.size());
    CHECK(after.candidates.size() <= mid.candidates.size());
    CHECK(before.order_lower <= mid.order_lower + BigInt(0));
    CHECK((*mid.order_upper % *after.order_upper).is_zero());
}

TEST_CASE("abelian p-group enumeration") {
    auto groups = abelian_p_groups_up_to(2, 3);
    // orders 1, 2, 4, 4, 8, 8, 8: partitions of 0..3
    CHECK(groups.size() == 7);
    int order8 = 0;
    for (const auto& g : groups)
        if (g.order().to_int64() == 8) ++order8;
    CHECK(order8 == 3);  // Z/8, Z/2+Z/4, (Z/2)^3
}

TEST_CASE("case: M11 concludes Z/8 with one external assertion") {
    CaseReport r = run_case_file(data_dir + "/cases/m11.case.json", data_dir);
    const Conclusion* c2 = find_conclusion(r, "M11", 2);
    REQUIRE(c2);
    REQUIRE(c2->determined);
    CHECK(c2->value->to_string() == "8");
    const Conclusion* ci = find_conclusion(r, "M11", 0);
    REQUIRE(ci);
    REQUIRE(ci->determined);
    CHECK(ci->value->to_string() == "8");
    CHECK_FALSE(r.fully_mechanized);
    // exactly one external assertion
    CHECK(r.json_text.find("\"external_assertions\": 1") != std::string::npos);
}

TEST_CASE("case: M22 cover chain 4 / 3 / 8 / 12 / 24") {
    CaseReport r = run_case_file(data_dir + "/cases/m22.case.json", data_dir);
    auto want = [&](const std::string& g, const std::string& value) {
        const Conclusion* c = find_conclusion(r, g, 0);
        REQUIRE(c);
        REQUIRE(c->determined);
        CHECK(c->value->to_string() == value);
    };
    want("2M22", "4");
    want("3M22", "3");
    want("4M22", "8");
    want("6M22", "12");
    want("12M22", "24");
}

TEST_CASE("case: Dempwolff extension concludes Z/24") {
    CaseReport r = run_case_file(data_dir + "/cases/dempwolff.case.json", data_dir);
    const Conclusion* c2 = find_conclusion(r, "2^5.GL5(2)", 2);
    REQUIRE(c2);
    REQUIRE(c2->determined);
    CHECK(c2->value->to_string() == "8");
    const Conclusion* c3 = find_conclusion(r, "2^5.GL5(2)", 3);
    REQUIRE(c3);
    REQUIRE(c3->determined);
    CHECK(c3->value->to_string() == "3");
    const Conclusion* ci = find_conclusion(r, "2^5.GL5(2)", 0);
    REQUIRE(ci);
    CHECK(ci->value->to_string() == "24");
}

TEST_CASE("case: Co3 2-part squeezes to at most Z/2 without overclaiming") {
    CaseReport r = run_case_file(data_dir + "/cases/co3.case.json", data_dir);
    const Conclusion* c = find_conclusion(r, "Co3", 2);
    REQUIRE(c);
    CHECK_FALSE(c->determined);
    CHECK(c->order_upper->to_int64() == 2);
    CHECK(c->candidates.size() == 2);
}

TEST_CASE("case: Suz 3- and 5-parts vanish") {
    CaseReport r = run_case_file(data_dir + "/cases/suz.case.json", data_dir);
    const Conclusion* c3 = find_conclusion(r, "Suz", 3);
    REQUIRE(c3);
    REQUIRE(c3->determined);
    CHECK(c3->value->is_trivial());
    const Conclusion* c5 = find_conclusion(r, "Suz", 5);
    REQUIRE(c5);
    CHECK(c5->value->is_trivial());
}

TEST_CASE("case: G2(5) large primes and the 5-part vanish") {
    CaseReport r = run_case_file(data_dir + "/cases/g2_5.case.json", data_dir);
    for (long long p : {5, 7, 31}) {
        const Conclusion* c = find_conclusion(r, "G2(5)", p);
        REQUIRE(c);
        REQUIRE(c->determined);
        CHECK(c->value->is_trivial());
    }
}

TEST_CASE("case: C4 spot check agrees with the oracle") {
    CaseReport r = run_case_file(data_dir + "/cases/c4.case.json", data_dir);
    const Conclusion* c = find_conclusion(r, "C4", 0);
    REQUIRE(c);
    REQUIRE(c->determined);
    CHECK(*c->value == bar_cohomology(MultTable::cyclic(4), 4));
}

TEST_CASE("case reports replay byte-identically") {
    for (std::string name : {"m11", "m22", "dempwolff", "co3", "suz", "g2_5", "c4"}) {
        CaseReport a = run_case_file(data_dir + "/cases/" + name + ".case.json", data_dir);
        CaseReport b = run_case_file(data_dir + "/cases/" + name + ".case.json", data_dir);
        CHECK(a.json_text == b.json_text);
    }
}

TEST_CASE("large_primes abstains when the class count is too big") {
    std::string text = R"({
      "case": "abstention",
      "declares": [
        {"kind": "group", "id": "J2", "order": 604800},
        {"kind": "sylow-shape", "group": "J2", "p": 5, "shape": "pxp"},
        {"kind": "class-count", "group": "J2", "element_order": 5, "at_most": 2,
         "source": "class list"}
      ],
      "applies": [{"rule": "large_primes", "subject": "J2", "p": 5}]
    })";
    CaseReport r = run_case_text(text, data_dir);
    // 2 classes of order 5 is not strictly fewer than (5-1)/2 = 2: no fact
    CHECK(r.json_text.find("large_primes") == std::string::npos);
}

TEST_CASE("a case with no external assertions is marked fully mechanized") {
    std::string text = R"({
      "case": "mechanized",
      "declares": [
        {"kind": "group", "id": "C4", "order": 4},
        {"kind": "table", "group": "C4", "file": "tables/c4_ext.json"}
      ],
      "applies": [
        {"rule": "class_lower_bound", "subject": "C4", "p": 2, "character": "rho2", "class": "4a",
         "method": "chern"}
      ]
    })";
    CaseReport r = run_case_text(text, data_dir);
    CHECK(r.fully_mechanized);
    CHECK(r.json_text.find("\"fully_mechanized\": true") != std::string::npos);
}

TEST_CASE("large_primes requires a declared Sylow shape") {
    std::string text = R"({
      "case": "no-shape",
      "declares": [
        {"kind": "group", "id": "G", "order": 7920},
        {"kind": "class-count", "group": "G", "element_order": 11, "at_most": 2, "source": "x"}
      ],
      "applies": [{"rule": "large_primes", "subject": "G", "p": 11}]
    })";
    CHECK_THROWS_WITH_AS(run_case_text(text, data_dir), doctest::Contains("Sylow shape"),
                         ValidationError);
}

TEST_CASE("central_character abstains at p = 2 and validates coprimality") {
    std::string ok = R"({
      "case": "cc",
      "declares": [{"kind": "group", "id": "S", "order": 100}],
      "applies": [{"rule": "central_character", "subject": "S", "p": 2, "center_order": 5,
                   "nontrivial_source": "x", "degrees": [2]}]
    })";
    CaseReport r = run_case_text(ok, data_dir);
    CHECK(r.json_text.find("central_character") == std::string::npos);  // abstained

    std::string bad = R"({
      "case": "cc2",
      "declares": [{"kind": "group", "id": "S", "order": 100}],
      "applies": [{"rule": "central_character", "subject": "S", "p": 5, "center_order": 10,
                   "nontrivial_source": "x", "degrees": [2]}]
    })";
    CHECK_THROWS_AS(run_case_text(bad, data_dir), ValidationError);
}

TEST_CASE("deliberately contradictory case file halts with exit-worthy error") {
    std::string text = R"({
      "case": "clash",
      "declares": [
        {"kind": "group", "id": "G", "order": 64},
        {"kind": "assert-external", "subject": "G", "p": 2, "fact": "order_divides", "value": 4,
         "source": "upper source"},
        {"kind": "assert-external", "subject": "G", "p": 2, "fact": "order_divisible_by", "value": 8,
         "source": "lower source"}
      ],
      "applies": [{"rule": "conclude", "subject": "G", "p": 2}]
    })";
    CHECK_THROWS_AS(run_case_text(text, data_dir), ContradictionError);
}
