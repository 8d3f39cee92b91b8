#pragma once

#include <map>
#include <string>
#include <vector>

#include "limecep/event.hpp"
#include "limecep/match.hpp"
#include "limecep/pattern.hpp"
#include "limecep/shared_index.hpp"

namespace limecep {

struct TimeInterval {
    Timestamp start_ms = 0;
    Timestamp end_ms = 0;
    bool contains(Timestamp t) const { return start_ms <= t && t <= end_ms; }
};

// Everything needed to construct matches anchored at one end event: the pattern
// and per-type ordered event lists restricted to [end.gen - W, end.gen].
struct DetectionRequest {
    const PatternSpec* pattern = nullptr;
    Event end_event;
    std::map<std::string, std::vector<Event>> universe;
};

DetectionRequest build_request(const PatternSpec& pattern, const Event& end_event,
                               const SharedIndex& index);

// Maximal-match construction anchored at the request's end event.
//
// Every element position enumerates its first bound event; Kleene positions then
// absorb every compatible event up to the next position's first binding. Under
// the next-match policy a non-Kleene intermediate must be the first compatible
// event after the previous binding (start alternatives are enumerated; the end
// binding is fixed, since end events are evaluated independently). Under the
// any-match policy all first-event combinations are admitted. Candidates are
// deduplicated and reduced to maximal matches.
std::vector<MatchRecord> detect_from_end(const DetectionRequest& req);

// Re-evaluation after a qualifying late arrival: one detection per end-type
// event generated inside the reprocessing interval, each over its own full
// window drawn from the shared index. Results carry the ooo flag.
std::vector<MatchRecord> detect_on_demand(const PatternSpec& pattern, const SharedIndex& index,
                                          const TimeInterval& reprocess, const Event& trigger);

// Keeps a match only when no other match in the list strictly contains its
// event set. Element types are unique within a pattern, so strict containment
// implies identical non-Kleene bindings.
std::vector<MatchRecord> maximal_filter(std::vector<MatchRecord> matches, const PatternSpec& pattern);

// Deterministic order: lexicographic by event-key sequence.
void sort_matches(std::vector<MatchRecord>& matches);

}  // namespace limecep
