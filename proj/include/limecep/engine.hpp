#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "limecep/event_manager.hpp"
#include "limecep/result_manager.hpp"
#include "limecep/shared_index.hpp"
#include "limecep/stats.hpp"

namespace limecep {

struct EngineConfig {
    std::vector<PatternSpec> patterns;
    ManagerConfig manager;                            // defaults for every pattern
    std::map<std::string, ManagerConfig> per_pattern; // overrides keyed by pattern id
    SourceConfig sources;
    std::optional<Timestamp> retention_ms; // default: max over patterns of 4*W
    std::size_t maintenance_interval = 256;
};

struct EngineCounters {
    std::uint64_t delivered = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t discarded = 0; // extremely-late verdicts, summed over patterns
    std::uint64_t removed = 0;   // events dropped from the index (late for all)
    std::uint64_t buffered = 0;
    std::uint64_t triggers_end = 0;
    std::uint64_t triggers_on_demand = 0;
};

// Wires one shared index and one shared statistics instance to a per-pattern
// event manager and result manager each, and drives them on a virtual clock
// derived from arrival timestamps.
class Engine {
  public:
    explicit Engine(EngineConfig config);

    // Advances the clock to the event's arrival (firing deferred reprocessing
    // that came due first), stores the event, updates statistics, and runs every
    // interested pattern manager. Returns all emissions this arrival caused.
    std::vector<OutputEvent> process(const Event& e);

    // Fires every still-pending deferred trigger; call at end of input.
    std::vector<OutputEvent> flush();

    const SharedIndex& index() const { return index_; }
    const StreamStats& stats() const { return stats_; }
    const EngineCounters& counters() const { return counters_; }
    Timestamp now() const { return now_; }

    const std::vector<PatternSpec>& patterns() const { return patterns_; }
    const ResultManager& result_manager(const std::string& pattern_id) const;
    const std::map<std::string, std::vector<std::string>>& type_to_patterns() const {
        return type_to_patterns_;
    }

  private:
    std::vector<OutputEvent> fire_due(Timestamp horizon);
    std::vector<OutputEvent> fire_pending(std::size_t pattern_idx, Timestamp at,
                                          const EventKey& end_key);
    void maintain();

    std::vector<PatternSpec> patterns_;
    SourceConfig sources_;
    std::size_t maintenance_interval_;
    SharedIndex index_;
    StreamStats stats_;
    std::vector<std::unique_ptr<EventManager>> managers_;
    std::vector<std::unique_ptr<ResultManager>> results_;
    std::map<std::string, std::vector<std::string>> type_to_patterns_;
    std::map<std::string, std::vector<std::size_t>> type_to_indices_;
    Timestamp now_ = 0;
    bool clock_started_ = false;
    std::uint64_t since_maintenance_ = 0;
    EngineCounters counters_;
};

// Forward (pattern -> event types) and inverted (event type -> patterns) maps.
std::pair<std::map<std::string, std::vector<std::string>>,
          std::map<std::string, std::vector<std::string>>>
register_mapping(const std::vector<PatternSpec>& patterns);

}  // namespace limecep
