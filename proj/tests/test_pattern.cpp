#include <doctest.h>

#include "limecep/errors.hpp"
#include "limecep/pattern.hpp"
#include "test_support.hpp"

using namespace limecep;
using testsupport::ev;

namespace {

const char* kSmartHome =
    "PATTERN SEQ( GasLeakSensor a, TemperatureSensor+ b[], SmokeDetector c ) "
    "WHERE a.percentage > thresholdGas "
    "AND b[i+1].temperature > b[i].temperature "
    "AND c.percentage >= thresholdSmoke "
    "WITHIN 30 seconds";

}  // namespace

TEST_CASE("parses a Kleene sequence with window normalization") {
    PatternSpec p = parse_pattern("PATTERN SEQ(A a, B[] b+, C c) WITHIN 10 seconds");
    REQUIRE(p.elements.size() == 3);
    CHECK(p.elements[0].type == "A");
    CHECK_FALSE(p.elements[0].kleene);
    CHECK(p.elements[1].type == "B");
    CHECK(p.elements[1].kleene);
    CHECK_FALSE(p.elements[2].kleene);
    CHECK(p.window_ms == 10'000);
    CHECK(p.end_type() == "C");
}

TEST_CASE("rejects a single-element pattern") {
    CHECK_THROWS_AS(parse_pattern("PATTERN SEQ(A a) WITHIN 5 seconds"), ParseError);
}

TEST_CASE("parses the smart-home query") {
    PatternSpec p = parse_pattern(kSmartHome);
    REQUIRE(p.elements.size() == 3);
    CHECK(p.elements[0].type == "GasLeakSensor");
    CHECK(p.elements[1].type == "TemperatureSensor");
    CHECK(p.elements[1].kleene);
    CHECK(p.elements[2].type == "SmokeDetector");
    CHECK(p.predicates.size() == 3);
    CHECK(p.predicates[0].kind == Predicate::Kind::Constant);
    CHECK(p.predicates[1].kind == Predicate::Kind::IterationAdjacent);
    CHECK(p.window_ms == 30'000);
    CHECK(p.end_type() == "SmokeDetector");
}

TEST_CASE("rejects negated elements as unsupported") {
    CHECK_THROWS_WITH_AS(
        parse_pattern("PATTERN SEQ(!ROOM a, STEPS+ b[], DOOR c) WITHIN 10 minutes"),
        doctest::Contains("negated"), ParseError);
}

TEST_CASE("rejects a Kleene element in final position") {
    CHECK_THROWS_AS(parse_pattern("PATTERN SEQ(A a, B[] b+) WITHIN 10 seconds"), ParseError);
}

TEST_CASE("rejects unknown aliases and misplaced iteration predicates") {
    CHECK_THROWS_AS(parse_pattern("PATTERN SEQ(A a, B b) WHERE x.v > 1 WITHIN 5 seconds"),
                    ParseError);
    CHECK_THROWS_AS(
        parse_pattern("PATTERN SEQ(A a, B b) WHERE a[i+1].v > a[i].v WITHIN 5 seconds"),
        ParseError);
    CHECK_THROWS_AS(parse_pattern("PATTERN SEQ(A a, B b, A x) WITHIN 5 seconds"), ParseError);
}

TEST_CASE("reports a position for syntax errors") {
    try {
        parse_pattern("PATTERN SEQ(A a B b) WITHIN 5 seconds");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() > 0);
    }
}

TEST_CASE("keywords are case-insensitive, names are not") {
    PatternSpec p = parse_pattern("pattern seq(A a, B b) within 2 Minutes");
    CHECK(p.window_ms == 120'000);
    CHECK(p.elements[0].type == "A");
}

TEST_CASE("parse-render round trip is stable") {
    for (const char* text :
         {"PATTERN SEQ(A a, B[] b+, C c) WITHIN 10 seconds", kSmartHome,
          "PATTERN SEQ(A a, B b, C c) WHERE a.value < b.value AND c.value != 'x' WITHIN 1 minutes"}) {
        PatternSpec once = parse_pattern(text);
        PatternSpec twice = parse_pattern(render_pattern(once));
        CHECK(render_pattern(once) == render_pattern(twice));
        CHECK(once.window_ms == twice.window_ms);
        CHECK(once.elements.size() == twice.elements.size());
        CHECK(once.predicates.size() == twice.predicates.size());
    }
}

TEST_CASE("every parsed predicate alias resolves") {
    PatternSpec p = parse_pattern(kSmartHome);
    for (const auto& pred : p.predicates)
        for (const Operand* op : {&pred.lhs, &pred.rhs})
            if (op->kind == Operand::Kind::Attribute)
                CHECK(p.element_for_alias(op->alias) != nullptr);
}

TEST_CASE("iteration predicate is the conjunction over consecutive pairs") {
    PatternSpec p = parse_pattern(
        "PATTERN SEQ(A a, B[] b+, C c) WHERE b[i+1].value > b[i].value WITHIN 10 seconds");
    const Predicate& pred = p.predicates[0];

    Bindings rising{{"b",
                     {ev("B", 1000, 0, "b1", {{"value", 5.0}}),
                      ev("B", 2000, 0, "b2", {{"value", 7.0}}),
                      ev("B", 3000, 0, "b3", {{"value", 9.0}})}}};
    CHECK(eval_predicate(pred, rising));

    Bindings single{{"b", {ev("B", 1000, 0, "b1", {{"value", 5.0}})}}};
    CHECK(eval_predicate(pred, single));

    Bindings falling{{"b",
                      {ev("B", 1000, 0, "b1", {{"value", 5.0}}),
                       ev("B", 2000, 0, "b2", {{"value", 4.0}})}}};
    CHECK_FALSE(eval_predicate(pred, falling));
}

TEST_CASE("constant predicate compares against the literal") {
    PatternSpec p =
        parse_pattern("PATTERN SEQ(A a, B b) WHERE a.percentage > 40 WITHIN 10 seconds");
    Bindings low{{"a", {ev("A", 1000, 0, "a1", {{"percentage", 35.0}})}}};
    CHECK_FALSE(eval_predicate(p.predicates[0], low));
    Bindings high{{"a", {ev("A", 1000, 0, "a1", {{"percentage", 55.0}})}}};
    CHECK(eval_predicate(p.predicates[0], high));
}

TEST_CASE("missing attributes raise a malformed-event error") {
    PatternSpec p =
        parse_pattern("PATTERN SEQ(A a, B b) WHERE a.percentage > 40 WITHIN 10 seconds");
    Bindings missing{{"a", {ev("A", 1000)}}};
    CHECK_THROWS_AS((void)eval_predicate(p.predicates[0], missing), MalformedEventError);
}

TEST_CASE("unresolved named constants raise a config error") {
    PatternSpec p = parse_pattern(kSmartHome);
    Bindings b{{"a", {ev("GasLeakSensor", 1000, 0, "g1", {{"percentage", 50.0}})}}};
    CHECK_THROWS_AS((void)eval_predicate(p.predicates[0], b), ConfigError);
}

TEST_CASE("end_type returns the final element's type") {
    CHECK(parse_pattern("PATTERN SEQ(A a, B[] b+, C c) WITHIN 10 seconds").end_type() == "C");
    CHECK(parse_pattern("PATTERN SEQ(A a, B b) WITHIN 10 seconds").end_type() == "B");
    CHECK(parse_pattern(kSmartHome).end_type() == "SmokeDetector");
}

TEST_CASE("string comparisons are lexicographic, mixed types unequal") {
    CHECK(compare_values(std::string("abc"), CmpOp::Lt, std::string("abd")));
    CHECK(compare_values(5.0, CmpOp::Le, 5.0));
    CHECK_FALSE(compare_values(5.0, CmpOp::Eq, std::string("5")));
    CHECK(compare_values(5.0, CmpOp::Ne, std::string("5")));
}
