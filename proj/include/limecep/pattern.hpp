#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "limecep/event.hpp"

namespace limecep {

enum class SelectionPolicy { Stnm, Stam };

std::string to_string(SelectionPolicy policy);
SelectionPolicy policy_from_string(const std::string& text);

struct PatternElement {
    std::string type;  // event-type name, unique within a pattern
    std::string alias; // binding name, unique within a pattern
    bool kleene = false;
};

enum class CmpOp { Lt, Le, Gt, Ge, Eq, Ne };

// One side of a comparison: either an attribute reference or a literal.
// Kleene iteration references carry an index ([i] or [i+1]).
struct Operand {
    enum class Kind { Attribute, Literal, NamedConstant };
    enum class Index { None, I, IPlusOne };

    Kind kind = Kind::Literal;
    std::string alias;  // Attribute
    std::string attr;   // Attribute
    Index index = Index::None;
    Value literal = 0.0;  // Literal
    std::string name;     // NamedConstant (unresolved user-defined threshold)
};

struct Predicate {
    enum class Kind { IterationAdjacent, CrossElement, Constant };

    Kind kind = Kind::Constant;
    Operand lhs;
    Operand rhs;
    CmpOp op = CmpOp::Eq;
};

struct PatternSpec {
    std::string id;
    std::vector<PatternElement> elements; // >= 2, last element is the end type
    Timestamp window_ms = 0;
    std::vector<Predicate> predicates;
    SelectionPolicy policy = SelectionPolicy::Stnm;

    const std::string& end_type() const { return elements.back().type; }
    bool has_type(const std::string& type) const;
    // Index into `elements`, or nullopt when the type is not part of the pattern.
    std::optional<std::size_t> element_index(const std::string& type) const;
    const PatternElement* element_for_alias(const std::string& alias) const;
};

// Parses the query grammar:
//   PATTERN SEQ(<Type> <alias>, ...) [WHERE <pred> [AND <pred>]...] WITHIN <n> <unit>
// Kleene positions are marked with '+' and/or '[]' on the type or alias.
// Keywords are case-insensitive; aliases and type names are case-sensitive.
// Throws ParseError (with offset) on bad syntax, unknown aliases, iteration
// predicates on non-Kleene elements, and unsupported features ('!X' negation,
// Kleene on the final element).
PatternSpec parse_pattern(const std::string& text, const std::string& pattern_id = "pattern");

// Renders a pattern back to query text (round-trip stable through parse_pattern).
std::string render_pattern(const PatternSpec& pattern);

using Bindings = std::map<std::string, std::vector<Event>>; // alias -> bound events, ascending

// Evaluates one predicate against bound events. IterationAdjacent predicates are
// the conjunction over consecutive pairs of the Kleene list (vacuously true for a
// single binding). Unindexed references to a Kleene alias apply to every bound
// event. Throws MalformedEventError when a referenced attribute is missing and
// ConfigError for unresolved named constants.
bool eval_predicate(const Predicate& pred, const Bindings& bindings);

// All predicates of the pattern, conjunction.
bool eval_all_predicates(const PatternSpec& pattern, const Bindings& bindings);

bool compare_values(const Value& lhs, CmpOp op, const Value& rhs);

}  // namespace limecep
