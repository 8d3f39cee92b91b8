#pragma once

#include <string>
#include <vector>

#include "limecep/event.hpp"
#include "limecep/pattern.hpp"

namespace limecep {

struct MatchRecord {
    std::vector<Event> events; // strictly ascending in the event total order
    std::string pattern_id;
    Timestamp start_ms = 0; // gen of first event
    Timestamp end_ms = 0;   // gen of last event
    bool emitted = false;
    bool ooo = false;     // produced by out-of-order recomputation
    bool updated = false; // corrected after emission
    Timestamp emit_wallclock = 0;

    EventSet keys() const { return event_set(events); }
    const Event& first() const { return events.front(); }
    const Event& last() const { return events.back(); }
};

MatchRecord make_match(std::vector<Event> events, const std::string& pattern_id);

inline bool within_window(const MatchRecord& m, Timestamp window_ms) {
    return m.end_ms - m.start_ms <= window_ms;
}

// Groups a match's events into alias bindings using the pattern's element types
// (types are unique per element, so the grouping is unambiguous).
Bindings bindings_of(const MatchRecord& m, const PatternSpec& pattern);

// True when `e` can extend the (possibly partial) match `m`: its type belongs to
// the pattern, it strictly follows every bound event, appending it keeps the
// window, and every predicate that binds it and only already-bound aliases holds.
bool is_compatible(const Event& e, const MatchRecord& m, const PatternSpec& pattern);

}  // namespace limecep
