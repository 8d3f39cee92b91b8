#include "limecep/match_engine.hpp"

#include <algorithm>
#include <set>

#include "limecep/errors.hpp"

namespace limecep {

namespace {

constexpr std::uint64_t kWorkLimit = 20'000'000;

// Compatibility during construction is evaluated with forward knowledge only:
// predicates are checked once every alias they reference is bound in element
// order. Predicates reaching later elements are settled by the final full-match
// validation.
struct Detector {
    const PatternSpec& pattern;
    const Event& end_event;
    const std::map<std::string, std::vector<Event>>& universe;
    std::uint64_t work = 0;

    std::size_t positions; // elements before the end position
    std::vector<const std::vector<Event>*> cands;
    std::vector<bool> enumerate_span; // any-match + span-constraining predicates
    Bindings bindings;
    std::vector<std::vector<Event>> spans;
    std::vector<MatchRecord> out;

    explicit Detector(const DetectionRequest& req)
        : pattern(*req.pattern), end_event(req.end_event), universe(req.universe) {
        positions = pattern.elements.size() - 1;
        cands.resize(positions);
        enumerate_span.resize(positions, false);
        spans.resize(positions);
        static const std::vector<Event> kEmpty;
        for (std::size_t j = 0; j < positions; ++j) {
            auto it = universe.find(pattern.elements[j].type);
            cands[j] = it == universe.end() ? &kEmpty : &it->second;
            if (pattern.policy != SelectionPolicy::Stam || !pattern.elements[j].kleene) continue;
            for (const auto& pred : pattern.predicates) {
                bool touches = (pred.lhs.kind == Operand::Kind::Attribute &&
                                pred.lhs.alias == pattern.elements[j].alias) ||
                               (pred.rhs.kind == Operand::Kind::Attribute &&
                                pred.rhs.alias == pattern.elements[j].alias);
                if (touches && pred.kind != Predicate::Kind::Constant) enumerate_span[j] = true;
            }
        }
    }

    void spend() {
        if (++work > kWorkLimit) throw CapacityError("match construction exceeded its work budget");
    }

    bool locally_bindable(const Event& e, std::size_t position) {
        const std::string& alias = pattern.elements[position].alias;
        auto& own = bindings[alias];
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

    bool adjacent_ok(const Event& prev, const Event& next, std::size_t position) {
        const std::string& alias = pattern.elements[position].alias;
        for (const auto& pred : pattern.predicates) {
            if (pred.kind != Predicate::Kind::IterationAdjacent || pred.lhs.alias != alias) continue;
            Bindings pair;
            pair[alias] = {prev, next};
            if (!eval_predicate(pred, pair)) return false;
        }
        return true;
    }

    void run() {
        std::vector<const Event*> firsts(positions, nullptr);
        choose_first(0, firsts);
    }

    // Phase 1: enumerate each position's first bound event, ascending.
    void choose_first(std::size_t j, std::vector<const Event*>& firsts) {
        if (j == positions) {
            fill_spans(0, nullptr, firsts);
            return;
        }
        for (const Event& c : *cands[j]) {
            spend();
            if (j > 0 && !precedes(*firsts[j - 1], c)) continue;
            if (!precedes(c, end_event)) break;
            if (end_event.gen_ms - c.gen_ms > pattern.window_ms) continue;
            firsts[j] = &c;
            choose_first(j + 1, firsts);
        }
        firsts[j] = nullptr;
    }

    // Phase 2: absorb Kleene spans between consecutive first bindings, check
    // next-match constraints, and emit candidates past the last position.
    void fill_spans(std::size_t j, const Event* prev_last, std::vector<const Event*>& firsts) {
        if (j == positions) {
            emit();
            return;
        }
        const Event& first = *firsts[j];
        const Event& upper = j + 1 < positions ? *firsts[j + 1] : end_event;
        const PatternElement& element = pattern.elements[j];

        if (prev_last != nullptr && !precedes(*prev_last, first)) return;
        if (!locally_bindable(first, j)) return;

        if (pattern.policy == SelectionPolicy::Stnm && !element.kleene && j > 0) {
            // Next-match: nothing bindable may sit between the previous binding
            // and this one.
            for (const Event& x : *cands[j]) {
                if (!precedes(*prev_last, x)) continue;
                if (!precedes(x, first)) break;
                if (locally_bindable(x, j)) return;
            }
        }

        if (!element.kleene) {
            spans[j] = {first};
            with_span(j, firsts);
            return;
        }

        std::vector<const Event*> pool;
        for (const Event& x : *cands[j]) {
            spend();
            if (!precedes(first, x)) continue;
            if (!precedes(x, upper)) break;
            pool.push_back(&x);
        }

        if (enumerate_span[j]) {
            // Span-wide predicates can rule out the greedy fill while admitting
            // incomparable subsequences; enumerate them all.
            std::vector<Event> chosen = {first};
            enumerate_subsequences(j, pool, 0, chosen, firsts);
            return;
        }

        std::vector<Event> span = {first};
        for (const Event* x : pool) {
            if (!adjacent_ok(span.back(), *x, j)) continue;
            if (!locally_bindable(*x, j)) continue;
            span.push_back(*x);
        }
        spans[j] = std::move(span);
        with_span(j, firsts);
    }

    void enumerate_subsequences(std::size_t j, const std::vector<const Event*>& pool, std::size_t i,
                                std::vector<Event>& chosen, std::vector<const Event*>& firsts) {
        spend();
        if (i == pool.size()) {
            spans[j] = chosen;
            with_span(j, firsts);
            return;
        }
        enumerate_subsequences(j, pool, i + 1, chosen, firsts);
        const Event& x = *pool[i];
        if (adjacent_ok(chosen.back(), x, j) && locally_bindable(x, j)) {
            chosen.push_back(x);
            enumerate_subsequences(j, pool, i + 1, chosen, firsts);
            chosen.pop_back();
        }
    }

    void with_span(std::size_t j, std::vector<const Event*>& firsts) {
        const std::string& alias = pattern.elements[j].alias;
        bindings[alias] = spans[j];
        fill_spans(j + 1, &spans[j].back(), firsts);
        bindings.erase(alias);
    }

    void emit() {
        const std::string& end_alias = pattern.elements.back().alias;
        bindings[end_alias] = {end_event};
        bool ok = eval_all_predicates(pattern, bindings);
        bindings.erase(end_alias);
        if (!ok) return;
        std::vector<Event> events;
        for (std::size_t j = 0; j < positions; ++j)
            events.insert(events.end(), spans[j].begin(), spans[j].end());
        events.push_back(end_event);
        MatchRecord m = make_match(std::move(events), pattern.id);
        if (!within_window(m, pattern.window_ms)) return;
        out.push_back(std::move(m));
    }
};

}  // namespace

DetectionRequest build_request(const PatternSpec& pattern, const Event& end_event,
                               const SharedIndex& index) {
    DetectionRequest req;
    req.pattern = &pattern;
    req.end_event = end_event;
    for (const auto& element : pattern.elements)
        req.universe[element.type] =
            index.range(element.type, end_event.gen_ms - pattern.window_ms, end_event.gen_ms);
    return req;
}

void sort_matches(std::vector<MatchRecord>& matches) {
    std::sort(matches.begin(), matches.end(),
              [](const MatchRecord& a, const MatchRecord& b) { return a.keys() < b.keys(); });
}

std::vector<MatchRecord> detect_from_end(const DetectionRequest& req) {
    if (req.pattern == nullptr || req.end_event.type != req.pattern->end_type()) return {};
    Detector detector(req);
    detector.run();

    std::vector<MatchRecord> unique;
    std::set<EventSet> seen;
    for (auto& m : detector.out)
        if (seen.insert(m.keys()).second) unique.push_back(std::move(m));
    unique = maximal_filter(std::move(unique), *req.pattern);
    sort_matches(unique);
    return unique;
}

std::vector<MatchRecord> detect_on_demand(const PatternSpec& pattern, const SharedIndex& index,
                                          const TimeInterval& reprocess, const Event& /*trigger*/) {
    std::vector<MatchRecord> all;
    std::set<EventSet> seen;
    for (const Event& end : index.range(pattern.end_type(), reprocess.start_ms, reprocess.end_ms)) {
        for (auto& m : detect_from_end(build_request(pattern, end, index))) {
            if (!seen.insert(m.keys()).second) continue;
            m.ooo = true;
            all.push_back(std::move(m));
        }
    }
    return all;
}

std::vector<MatchRecord> maximal_filter(std::vector<MatchRecord> matches, const PatternSpec&) {
    std::vector<EventSet> keys;
    keys.reserve(matches.size());
    for (const auto& m : matches) keys.push_back(m.keys());

    std::vector<MatchRecord> kept;
    for (std::size_t i = 0; i < matches.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < matches.size() && !dominated; ++j) {
            if (i == j || keys[i].size() >= keys[j].size()) continue;
            dominated = std::includes(keys[j].begin(), keys[j].end(), keys[i].begin(), keys[i].end());
        }
        if (!dominated) kept.push_back(std::move(matches[i]));
    }
    return kept;
}

}  // namespace limecep
