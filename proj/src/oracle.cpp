#include "limecep/oracle.hpp"

#include <algorithm>
#include <set>

#include "limecep/errors.hpp"
#include "limecep/match_engine.hpp"

namespace limecep {

namespace {

struct OracleWalk {
    const std::vector<Event>& events;
    const PatternSpec& pattern;
    std::uint64_t budget;
    std::uint64_t work = 0;

    std::size_t last_element;
    Bindings bindings;
    std::vector<Event> chosen;
    std::vector<MatchRecord> out;

    OracleWalk(const std::vector<Event>& events, const PatternSpec& pattern, std::uint64_t budget)
        : events(events), pattern(pattern), budget(budget) {
        last_element = pattern.elements.size() - 1;
    }

    void spend() {
        if (++work > budget) throw CapacityError("oracle enumeration exceeded its work budget");
    }

    bool pair_ok(const Event& prev, const Event& next, const std::string& alias) {
        for (const auto& pred : pattern.predicates) {
            if (pred.kind != Predicate::Kind::IterationAdjacent || pred.lhs.alias != alias) continue;
            Bindings pair;
            pair[alias] = {prev, next};
            if (!eval_predicate(pred, pair)) return false;
        }
        return true;
    }

    bool bindable(const Event& e, std::size_t element) {
        const std::string& alias = pattern.elements[element].alias;
        auto& own = bindings[alias];
        if (!own.empty() && pattern.elements[element].kleene && !pair_ok(own.back(), e, alias))
            return false;
        own.push_back(e);
        bool ok = true;
        for (const auto& pred : pattern.predicates) {
            if (pred.kind == Predicate::Kind::IterationAdjacent) continue;
            bool touches = false, resolvable = true;
            for (const Operand* op : {&pred.lhs, &pred.rhs}) {
                if (op->kind != Operand::Kind::Attribute) continue;
                if (op->alias == alias) touches = true;
                auto it = bindings.find(op->alias);
                if (it == bindings.end() || it->second.empty()) resolvable = false;
            }
            if (touches && resolvable && !eval_predicate(pred, bindings)) {
                ok = false;
                break;
            }
        }
        own.pop_back();
        if (own.empty()) bindings.erase(alias);
        return ok;
    }

    void bind(const Event& e, std::size_t element) {
        bindings[pattern.elements[element].alias].push_back(e);
        chosen.push_back(e);
    }

    void unbind(std::size_t element) {
        const std::string& alias = pattern.elements[element].alias;
        bindings[alias].pop_back();
        if (bindings[alias].empty()) bindings.erase(alias);
        chosen.pop_back();
    }

    void complete() {
        if (!eval_all_predicates(pattern, bindings)) return;
        out.push_back(make_match(chosen, pattern.id));
    }

    bool in_window(const Event& e) const {
        return chosen.empty() || e.gen_ms - chosen.front().gen_ms <= pattern.window_ms;
    }

    // Any-match: every event may be skipped, extend the current element (Kleene),
    // or open the next element.
    void walk_any(std::size_t i, std::size_t element, bool started) {
        spend();
        if (i == events.size()) return;
        const Event& e = events[i];
        if (started && !in_window(e)) return; // events ascend; nothing later fits either

        walk_any(i + 1, element, started);

        if (!started) {
            if (e.type == pattern.elements[0].type && bindable(e, 0)) {
                bind(e, 0);
                walk_any(i + 1, 0, true);
                unbind(0);
            }
            return;
        }
        if (pattern.elements[element].kleene && e.type == pattern.elements[element].type &&
            bindable(e, element)) {
            bind(e, element);
            walk_any(i + 1, element, true);
            unbind(element);
        }
        if (element + 1 <= last_element && e.type == pattern.elements[element + 1].type &&
            bindable(e, element + 1)) {
            bind(e, element + 1);
            if (element + 1 == last_element)
                complete();
            else
                walk_any(i + 1, element + 1, true);
            unbind(element + 1);
        }
    }

    // Next-match: a compatible event for the current Kleene element must be
    // taken; a compatible opener for a non-Kleene intermediate may be passed
    // over only while the current element keeps growing (end events are always
    // evaluated independently).
    void walk_next(std::size_t i, std::size_t element, bool started, bool passed_opener) {
        spend();
        if (i == events.size()) return;
        const Event& e = events[i];
        if (started && !in_window(e)) return;

        if (!started) {
            walk_next(i + 1, element, false, false);
            if (e.type == pattern.elements[0].type && bindable(e, 0)) {
                bind(e, 0);
                walk_next(i + 1, 0, true, false);
                unbind(0);
            }
            return;
        }

        const PatternElement& current = pattern.elements[element];
        if (current.kleene && e.type == current.type && bindable(e, element)) {
            // Forced continuation of the open Kleene span; a fresh binding resets
            // the next-match barrier.
            bind(e, element);
            walk_next(i + 1, element, true, false);
            unbind(element);
            return;
        }

        bool opener = element + 1 <= last_element && e.type == pattern.elements[element + 1].type &&
                      bindable(e, element + 1);
        if (opener) {
            std::size_t next = element + 1;
            bool next_constrained = next != last_element && !pattern.elements[next].kleene;
            if (!next_constrained || !passed_opener) {
                bind(e, next);
                if (next == last_element)
                    complete();
                else
                    walk_next(i + 1, next, true, false);
                unbind(next);
            }
            // Passing over a compatible opener of a constrained (non-Kleene,
            // non-end) element raises the next-match barrier; end events and
            // Kleene openers may always be passed.
            walk_next(i + 1, element, true, passed_opener || next_constrained);
            return;
        }
        walk_next(i + 1, element, true, passed_opener);
    }
};

}  // namespace

std::vector<MatchRecord> oracle_all_matches(const std::vector<Event>& events_in_order,
                                            const PatternSpec& pattern, std::size_t max_events,
                                            std::uint64_t work_limit) {
    if (events_in_order.size() > max_events)
        throw CapacityError("oracle refuses inputs beyond " + std::to_string(max_events) + " events");
    OracleWalk walk(events_in_order, pattern, work_limit);
    if (pattern.policy == SelectionPolicy::Stam)
        walk.walk_any(0, 0, false);
    else
        walk.walk_next(0, 0, false, false);

    std::vector<MatchRecord> unique;
    std::set<EventSet> seen;
    for (auto& m : walk.out)
        if (seen.insert(m.keys()).second) unique.push_back(std::move(m));
    sort_matches(unique);
    return unique;
}

std::vector<MatchRecord> ground_truth(const std::vector<Event>& events, const PatternSpec& pattern) {
    std::set<Event, EventOrderLess> ordered(events.begin(), events.end());
    std::vector<Event> in_order(ordered.begin(), ordered.end());
    auto maximal = maximal_filter(oracle_all_matches(in_order, pattern), pattern);
    sort_matches(maximal);
    return maximal;
}

}  // namespace limecep
