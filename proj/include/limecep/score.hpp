#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "limecep/event.hpp"

namespace limecep {

struct ScoreReport {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    double precision = 1.0; // tp/(tp+fp), 1 when nothing was emitted
    double recall = 1.0;    // tp/(tp+fn), 1 when nothing was expected
    double mean_latency_ms = 0.0;
    Timestamp max_latency_ms = 0;

    std::string to_json() const;
};

// Match equality is event-identity-set equality; timings never affect it.
ScoreReport evaluate(const std::set<EventSet>& emitted, const std::set<EventSet>& truth);

struct MultiScoreReport {
    std::map<std::string, ScoreReport> per_pattern;
    ScoreReport total;

    std::string to_json() const;
};

MultiScoreReport evaluate_all(const std::map<std::string, std::set<EventSet>>& emitted,
                              const std::map<std::string, std::set<EventSet>>& truth);

}  // namespace limecep
