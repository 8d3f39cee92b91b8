#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "limecep/engine.hpp"
#include "limecep/event.hpp"

namespace limecep {

// One parsed line of an event file, with its partition and position.
struct LoadedEvent {
    Event event;
    int partition = 0;
    std::size_t line = 0;
};

// Reads a JSON-lines event file: {"id","type","t_gen_ms","t_arr_ms","source",
// "partition","payload"}. id, type and t_gen_ms are required; t_arr_ms defaults
// to the line position in milliseconds, source to the type, partition to 0.
// Malformed lines raise ConfigError with the line number.
std::vector<LoadedEvent> load_event_file(const std::string& path);

// Arrival order: t_arr_ms, file order breaking ties.
std::vector<Event> arrival_order(std::vector<LoadedEvent> loaded);

// Partitioned delivery: within a partition arrival order is preserved; across
// partitions ties go to the lower partition index.
std::vector<Event> delivery_order(std::vector<LoadedEvent> loaded);

// load_event_file + arrival_order.
std::vector<Event> load_events(const std::string& path);

struct ReplaySummary {
    std::uint64_t processed = 0;
    std::uint64_t delivered = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t discarded = 0;
    std::uint64_t removed = 0;
    std::uint64_t emissions = 0;
    std::uint64_t adds = 0;
    std::uint64_t corrections = 0;
    std::uint64_t invalidations = 0;

    std::string to_json() const;
};

// Drives every event through the engine on the virtual clock, flushes deferred
// work at the end, and appends all emissions to `sink`.
ReplaySummary replay(const std::vector<Event>& sequence, Engine& engine,
                     std::vector<OutputEvent>& sink);

}  // namespace limecep
