#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "limecep/event.hpp"
#include "limecep/replay.hpp"

namespace limecep {

// Deterministic, platform-independent generator state (splitmix64).
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
};

struct TypeSpec {
    std::string name;
    double mean_gap_s = 1.0;
};

// When set, the base layout is one event per type per cluster (types in
// alphabet order, `step_ms` apart, clusters `gap_ms` apart) instead of merged
// independent per-type processes.
struct ClusterLayout {
    Timestamp gap_ms = 30'000;
    Timestamp step_ms = 1'000;
};

struct DatasetSpec {
    std::size_t n_events = 0;
    std::vector<TypeSpec> type_alphabet;
    std::uint64_t seed = 1;
    double ooo_probability = 0.0;   // chance an event's arrival is displaced
    Timestamp max_displacement_ms = 0; // forward arrival delay bound, uniform (0, max]
    std::size_t duplicate_count = 0;
    std::optional<ClusterLayout> cluster;
};

// In-order base (t_arr = t_gen), then independent per-event forward arrival
// displacement with the given probability, then duplicate copies of randomly
// chosen events with identical identity keys and later arrivals. The result is
// in arrival order.
std::vector<LoadedEvent> generate_events(const DatasetSpec& spec);

// JSON-lines event file for the replay source.
void write_event_file(const std::string& path, const std::vector<LoadedEvent>& events);

// generate_events + write_event_file.
void generate_dataset(const DatasetSpec& spec, const std::string& path);

DatasetSpec dataset_spec_from_json_file(const std::string& path);
DatasetSpec dataset_spec_from_json(const std::string& json_text);

}  // namespace limecep
