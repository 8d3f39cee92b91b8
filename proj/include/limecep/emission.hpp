#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "limecep/result_manager.hpp"

namespace limecep {

// One emission as a JSON-lines record:
//   {"kind":..., "pattern_id":..., "events":[{"type","t_gen","id"},...],
//    "replaces":[...]?, "latency_ms":..., "at":...}
std::string emission_to_json(const OutputEvent& emission);

void write_emission_log(std::ostream& os, const std::vector<OutputEvent>& emissions);
void write_emission_log_file(const std::string& path, const std::vector<OutputEvent>& emissions);

struct LoggedEmission {
    std::string kind;
    std::string pattern_id;
    EventSet events;
    std::optional<EventSet> replaces;
    Timestamp latency_ms = 0;
    Timestamp at_ms = 0;
};

std::vector<LoggedEmission> read_emission_log_file(const std::string& path);

// The surviving match sets per pattern after applying corrections and
// invalidations in log order.
std::map<std::string, std::set<EventSet>> final_emitted(const std::vector<LoggedEmission>& log);
std::map<std::string, std::set<EventSet>> final_emitted(const std::vector<OutputEvent>& emissions);

}  // namespace limecep
