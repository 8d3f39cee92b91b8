#include "limecep/emission.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

#include "limecep/errors.hpp"

namespace limecep {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json keys_to_json(const EventSet& keys) {
    ordered_json arr = ordered_json::array();
    for (const EventKey& k : keys) {
        ordered_json o;
        o["type"] = k.type;
        o["t_gen"] = k.gen_ms;
        o["id"] = k.id;
        arr.push_back(std::move(o));
    }
    return arr;
}

EventSet keys_from_json(const ordered_json& arr) {
    EventSet keys;
    for (const auto& o : arr)
        keys.push_back(EventKey{o.at("t_gen").get<Timestamp>(), o.at("type").get<std::string>(),
                                o.at("id").get<std::string>()});
    return keys;
}

}  // namespace

std::string emission_to_json(const OutputEvent& emission) {
    ordered_json o;
    o["kind"] = to_string(emission.kind);
    o["pattern_id"] = emission.match.pattern_id;
    o["events"] = keys_to_json(emission.match.keys());
    if (emission.replaces) o["replaces"] = keys_to_json(*emission.replaces);
    o["latency_ms"] = emission.latency_ms;
    o["at"] = emission.at_ms;
    return o.dump();
}

void write_emission_log(std::ostream& os, const std::vector<OutputEvent>& emissions) {
    for (const auto& e : emissions) os << emission_to_json(e) << "\n";
}

void write_emission_log_file(const std::string& path, const std::vector<OutputEvent>& emissions) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write emission log: " + path);
    write_emission_log(os, emissions);
}

std::vector<LoggedEmission> read_emission_log_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read emission log: " + path);
    std::vector<LoggedEmission> log;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json o;
        try {
            o = ordered_json::parse(line);
        } catch (const std::exception& ex) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + ex.what());
        }
        LoggedEmission e;
        e.kind = o.at("kind").get<std::string>();
        e.pattern_id = o.at("pattern_id").get<std::string>();
        e.events = keys_from_json(o.at("events"));
        if (o.contains("replaces")) e.replaces = keys_from_json(o.at("replaces"));
        e.latency_ms = o.value("latency_ms", Timestamp{0});
        e.at_ms = o.value("at", Timestamp{0});
        log.push_back(std::move(e));
    }
    return log;
}

std::map<std::string, std::set<EventSet>> final_emitted(const std::vector<LoggedEmission>& log) {
    std::map<std::string, std::set<EventSet>> sets;
    for (const auto& e : log) {
        auto& s = sets[e.pattern_id];
        if (e.replaces) s.erase(*e.replaces);
        s.insert(e.events);
    }
    return sets;
}

std::map<std::string, std::set<EventSet>> final_emitted(const std::vector<OutputEvent>& emissions) {
    std::map<std::string, std::set<EventSet>> sets;
    for (const auto& e : emissions) {
        auto& s = sets[e.match.pattern_id];
        if (e.replaces) s.erase(*e.replaces);
        s.insert(e.match.keys());
    }
    return sets;
}

}  // namespace limecep
