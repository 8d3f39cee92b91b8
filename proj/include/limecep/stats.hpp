#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "limecep/event.hpp"

namespace limecep {

// Per-source configuration: the user-declared estimated inter-arrival gap in
// seconds seeds the running actual-rate estimate before evidence exists.
struct SourceConfig {
    std::map<std::string, double> estimated_gap_s; // event type -> seconds

    double estimated_for(const std::string& type, double fallback = 1.0) const {
        auto it = estimated_gap_s.find(type);
        return it == estimated_gap_s.end() ? fallback : it->second;
    }
};

// Shared counters, per-source arrival-rate estimates, out-of-order aggregates,
// and the generation-time watermark. "Rates" are mean inter-arrival gaps in
// seconds; the actual gap is measured on arrival wallclock, since it models
// source delivery behavior.
class StreamStats {
  public:
    explicit StreamStats(SourceConfig sources = {}) : sources_(std::move(sources)) {}

    // Counts, arrival-gap mean, watermark, and (when ooo_time_s > 0) the
    // out-of-order time aggregates.
    void record_event(const Event& e, double ooo_time_s);
    // Folds one disorder score into the per-source running mean.
    void record_ooo_score(const std::string& type, double score);
    // Convenience for the single-pattern path: both of the above in one call.
    void record_arrival(const Event& e, double ooo_time_s, double ooo_score);

    // Lateness threshold for a source; +infinity before any disorder evidence,
    // and 0 when the multiplier is 0 (every late event becomes extremely late).
    double threshold(const std::string& type, double multiplier) const;

    double ooo_ratio() const;

    // Out-of-order time for an event against the current watermark, in seconds.
    double ooo_time_s(const Event& e) const;

    bool has_watermark() const { return has_lta_; }
    Timestamp lta_ms() const { return lta_ms_; }

    double estimated_gap_s(const std::string& type) const { return sources_.estimated_for(type); }
    // Mean arrival gap; seeded with the estimate until two arrivals were seen.
    double actual_gap_s(const std::string& type) const;

    std::uint64_t total_events() const { return ne_all_; }
    std::uint64_t total_ooo() const { return no_all_; }
    std::uint64_t events_of(const std::string& type) const;
    std::uint64_t ooo_of(const std::string& type) const;
    double avg_ooo_score(const std::string& type) const;

    struct TimeAggregate {
        double min_s = std::numeric_limits<double>::infinity();
        double max_s = 0.0;
        double sum_s = 0.0;
        std::uint64_t count = 0;
        double mean_s() const { return count == 0 ? 0.0 : sum_s / static_cast<double>(count); }
    };

    const TimeAggregate& global_ooo_time() const { return ooo_time_all_; }
    const TimeAggregate* ooo_time_of(const std::string& type) const;

    // Consistent copy of every counter and aggregate as JSON.
    std::string snapshot_json() const;

  private:
    struct PerType {
        std::uint64_t events = 0;
        std::uint64_t ooo = 0;
        std::optional<Timestamp> last_arr_ms;
        double gap_sum_s = 0.0;
        std::uint64_t gap_count = 0;
        TimeAggregate ooo_time;
        double score_sum = 0.0;
        std::uint64_t score_count = 0;
    };

    SourceConfig sources_;
    std::map<std::string, PerType> per_type_;
    std::uint64_t ne_all_ = 0;
    std::uint64_t no_all_ = 0;
    bool has_lta_ = false;
    Timestamp lta_ms_ = 0;
    TimeAggregate ooo_time_all_;
};

}  // namespace limecep
