#pragma once

#include <cstdint>
#include <vector>

#include "limecep/match.hpp"
#include "limecep/pattern.hpp"

namespace limecep {

// Exhaustive reference enumeration over an in-order event list, independent of
// the index-based detection path. Under the any-match policy it walks every
// event combination accepted by the pattern structure; under the next-match
// policy it walks every combination reachable by next-match element binding.
// No maximality filter is applied. Desk-scale only: refuses inputs beyond
// `max_events` or searches beyond `work_limit` expansions (CapacityError).
std::vector<MatchRecord> oracle_all_matches(const std::vector<Event>& events_in_order,
                                            const PatternSpec& pattern,
                                            std::size_t max_events = 300,
                                            std::uint64_t work_limit = 80'000'000);

// Reference answer for scoring: deduplicate, order, enumerate, keep maximal.
std::vector<MatchRecord> ground_truth(const std::vector<Event>& events, const PatternSpec& pattern);

}  // namespace limecep
