#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "limecep/match.hpp"
#include "limecep/pattern.hpp"

namespace limecep {

enum class EmissionKind { Add, Correct, Invalidate };

const char* to_string(EmissionKind kind);

struct OutputEvent {
    EmissionKind kind = EmissionKind::Add;
    MatchRecord match;                // the emitted / replacing match
    std::optional<EventSet> replaces; // Correct / Invalidate only
    Timestamp at_ms = 0;
    Timestamp latency_ms = 0; // measured from the first event's arrival
};

// Detection latency of a match at emission time.
Timestamp detection_latency(const MatchRecord& m, Timestamp now);

// Keeps emitted matches indexed by their last event; performs existence,
// maximality-correction, and next-match validity checks; assigns latencies.
class ResultManager {
  public:
    ResultManager(const PatternSpec& pattern, bool correction)
        : pattern_(&pattern), correction_(correction) {}

    // Runs the consistency checks for one detected match. Returns the emissions
    // it causes: usually one Add, a Correct/Invalidate replacing a stored match,
    // or nothing when the match is already known (or subsumed by a stored one).
    // With correction off only the existence check applies.
    std::vector<OutputEvent> submit(const MatchRecord& m, Timestamp now);

    // Drops stored matches ending before now - 2*W. The emission history is the
    // caller's log; only the working index shrinks.
    std::size_t expire(Timestamp now);

    std::vector<MatchRecord> current_matches() const;
    std::size_t stored_count() const { return store_.size(); }

    double mean_latency_ms() const;
    Timestamp max_latency_ms() const { return latency_max_ms_; }

  private:
    OutputEvent emit(EmissionKind kind, MatchRecord m, std::optional<EventSet> replaces,
                     Timestamp now);
    void insert_stored(const MatchRecord& m);
    void erase_stored(const EventSet& keys);

    const PatternSpec* pattern_;
    bool correction_;
    std::map<EventSet, MatchRecord> store_;
    std::map<EventKey, std::set<EventSet>> by_last_;
    double latency_sum_ms_ = 0.0;
    std::uint64_t latency_count_ = 0;
    Timestamp latency_max_ms_ = 0;
};

}  // namespace limecep
