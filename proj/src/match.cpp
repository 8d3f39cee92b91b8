#include "limecep/match.hpp"

#include <algorithm>

namespace limecep {

MatchRecord make_match(std::vector<Event> events, const std::string& pattern_id) {
    MatchRecord m;
    m.events = std::move(events);
    std::sort(m.events.begin(), m.events.end(), EventOrderLess{});
    m.pattern_id = pattern_id;
    if (!m.events.empty()) {
        m.start_ms = m.events.front().gen_ms;
        m.end_ms = m.events.back().gen_ms;
    }
    return m;
}

Bindings bindings_of(const MatchRecord& m, const PatternSpec& pattern) {
    Bindings bindings;
    for (const Event& e : m.events) {
        auto idx = pattern.element_index(e.type);
        if (!idx) continue;
        bindings[pattern.elements[*idx].alias].push_back(e);
    }
    return bindings;
}

bool is_compatible(const Event& e, const MatchRecord& m, const PatternSpec& pattern) {
    auto idx = pattern.element_index(e.type);
    if (!idx) return false;
    for (const Event& bound : m.events)
        if (!precedes(bound, e)) return false;
    if (!m.events.empty() && e.gen_ms - m.events.front().gen_ms > pattern.window_ms) return false;

    Bindings bindings = bindings_of(m, pattern);
    const std::string& alias = pattern.elements[*idx].alias;
    bindings[alias].push_back(e);
    for (const auto& pred : pattern.predicates) {
        bool touches = false, resolvable = true;
        for (const Operand* op : {&pred.lhs, &pred.rhs}) {
            if (op->kind != Operand::Kind::Attribute) continue;
            if (op->alias == alias) touches = true;
            auto it = bindings.find(op->alias);
            if (it == bindings.end() || it->second.empty()) resolvable = false;
        }
        if (!touches || !resolvable) continue;
        if (pred.kind == Predicate::Kind::IterationAdjacent) {
            // Only the freshly formed pair constrains e.
            const auto& list = bindings[alias];
            if (list.size() < 2) continue;
            Bindings pair_view;
            pair_view[alias] = {list[list.size() - 2], list.back()};
            if (!eval_predicate(pred, pair_view)) return false;
        } else if (!eval_predicate(pred, bindings)) {
            return false;
        }
    }
    return true;
}

}  // namespace limecep
