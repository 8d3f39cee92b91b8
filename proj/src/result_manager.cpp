#include "limecep/result_manager.hpp"

#include <algorithm>

namespace limecep {

const char* to_string(EmissionKind kind) {
    switch (kind) {
        case EmissionKind::Add: return "add";
        case EmissionKind::Correct: return "correct";
        case EmissionKind::Invalidate: return "invalidate";
    }
    return "add";
}

Timestamp detection_latency(const MatchRecord& m, Timestamp now) {
    return now - m.first().arr_ms;
}

namespace {

bool strict_subset(const EventSet& small, const EventSet& big) {
    return small.size() < big.size() &&
           std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

std::vector<OutputEvent> ResultManager::submit(const MatchRecord& m, Timestamp now) {
    EventSet keys = m.keys();
    if (store_.count(keys) > 0) return {}; // existence check: identical match

    if (!correction_) {
        std::vector<OutputEvent> out;
        out.push_back(emit(EmissionKind::Add, m, std::nullopt, now));
        return out;
    }

    // Stored matches sharing the end event are the correction candidates.
    std::vector<EventSet> same_end;
    auto it = by_last_.find(key_of(m.last()));
    if (it != by_last_.end()) same_end.assign(it->second.begin(), it->second.end());

    for (const EventSet& stored : same_end)
        if (strict_subset(keys, stored)) return {}; // already subsumed

    std::vector<EventSet> subsumed;
    for (const EventSet& stored : same_end)
        if (strict_subset(stored, keys)) subsumed.push_back(stored);

    std::vector<OutputEvent> out;
    if (!subsumed.empty()) {
        // Maximal extension of one or more stored matches; re-inserting the
        // replacing match is idempotent on its key.
        for (const EventSet& old_keys : subsumed) {
            MatchRecord replacing = m;
            replacing.updated = true;
            replacing.emit_wallclock = store_.at(old_keys).emit_wallclock;
            erase_stored(old_keys);
            out.push_back(emit(EmissionKind::Correct, std::move(replacing), old_keys, now));
        }
        return out;
    }

    if (pattern_->policy == SelectionPolicy::Stnm && m.events.size() >= 2) {
        // Validity: same start and end but an earlier binding on a non-Kleene
        // interior element means the stored match is no longer the next match.
        for (const EventSet& stored_keys : same_end) {
            const MatchRecord& stored = store_.at(stored_keys);
            if (!same_event(stored.first(), m.first())) continue;
            Bindings mine = bindings_of(m, *pattern_);
            Bindings theirs = bindings_of(stored, *pattern_);
            bool earlier = false, later = false;
            for (std::size_t j = 1; j + 1 < pattern_->elements.size(); ++j) {
                const PatternElement& el = pattern_->elements[j];
                if (el.kleene) continue;
                auto mi = mine.find(el.alias);
                auto ti = theirs.find(el.alias);
                if (mi == mine.end() || ti == theirs.end()) continue;
                const Event& a = mi->second.front();
                const Event& b = ti->second.front();
                if (precedes(a, b)) { earlier = true; break; }
                if (precedes(b, a)) { later = true; break; }
            }
            if (later) return {}; // stale candidate, keep the stored match
            if (earlier) {
                MatchRecord replacing = m;
                replacing.updated = true;
                erase_stored(stored_keys);
                out.push_back(emit(EmissionKind::Invalidate, std::move(replacing), stored_keys, now));
                return out;
            }
        }
    }

    out.push_back(emit(EmissionKind::Add, m, std::nullopt, now));
    return out;
}

OutputEvent ResultManager::emit(EmissionKind kind, MatchRecord m, std::optional<EventSet> replaces,
                                Timestamp now) {
    m.emitted = true;
    if (kind == EmissionKind::Add) m.emit_wallclock = now;
    insert_stored(m);

    OutputEvent out;
    out.kind = kind;
    out.replaces = std::move(replaces);
    out.at_ms = now;
    out.latency_ms = detection_latency(m, now);
    out.match = std::move(m);
    latency_sum_ms_ += static_cast<double>(out.latency_ms);
    ++latency_count_;
    latency_max_ms_ = std::max(latency_max_ms_, out.latency_ms);
    return out;
}

void ResultManager::insert_stored(const MatchRecord& m) {
    EventSet keys = m.keys();
    by_last_[key_of(m.last())].insert(keys);
    store_[std::move(keys)] = m;
}

void ResultManager::erase_stored(const EventSet& keys) {
    auto it = store_.find(keys);
    if (it == store_.end()) return;
    auto last = by_last_.find(key_of(it->second.last()));
    if (last != by_last_.end()) {
        last->second.erase(keys);
        if (last->second.empty()) by_last_.erase(last);
    }
    store_.erase(it);
}

std::size_t ResultManager::expire(Timestamp now) {
    Timestamp cutoff = now - 2 * pattern_->window_ms;
    std::vector<EventSet> stale;
    for (const auto& [keys, m] : store_)
        if (m.end_ms < cutoff) stale.push_back(keys);
    for (const EventSet& keys : stale) erase_stored(keys);
    return stale.size();
}

std::vector<MatchRecord> ResultManager::current_matches() const {
    std::vector<MatchRecord> out;
    out.reserve(store_.size());
    for (const auto& [keys, m] : store_) out.push_back(m);
    return out;
}

double ResultManager::mean_latency_ms() const {
    return latency_count_ == 0 ? 0.0 : latency_sum_ms_ / static_cast<double>(latency_count_);
}

}  // namespace limecep
