#include "limecep/replay.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "limecep/errors.hpp"

namespace limecep {

namespace {

using ordered_json = nlohmann::ordered_json;

Value value_from_json(const ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? 1.0 : 0.0;
    if (v.is_number()) return v.get<double>();
    throw ConfigError("payload values must be scalars");
}

}  // namespace

std::vector<LoadedEvent> load_event_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open event file: " + path);

    std::vector<LoadedEvent> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json o;
        try {
            o = ordered_json::parse(line);
        } catch (const std::exception& ex) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": invalid JSON: " + ex.what());
        }
        auto require = [&](const char* field) -> const ordered_json& {
            if (!o.contains(field))
                throw ConfigError(path + ":" + std::to_string(line_no) + ": missing field '" +
                                  field + "'");
            return o.at(field);
        };
        LoadedEvent le;
        le.line = line_no;
        try {
            le.event.id = require("id").is_string() ? o.at("id").get<std::string>()
                                                    : o.at("id").dump();
            le.event.type = require("type").get<std::string>();
            le.event.gen_ms = require("t_gen_ms").get<Timestamp>();
            le.event.arr_ms = o.contains("t_arr_ms") ? o.at("t_arr_ms").get<Timestamp>()
                                                     : static_cast<Timestamp>(line_no);
            le.event.source = o.value("source", le.event.type);
            le.partition = o.value("partition", 0);
            if (o.contains("payload"))
                for (const auto& [k, v] : o.at("payload").items())
                    le.event.payload[k] = value_from_json(v);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + ex.what());
        }
        out.push_back(std::move(le));
    }
    return out;
}

std::vector<Event> arrival_order(std::vector<LoadedEvent> loaded) {
    std::stable_sort(loaded.begin(), loaded.end(), [](const LoadedEvent& a, const LoadedEvent& b) {
        return a.event.arr_ms < b.event.arr_ms;
    });
    std::vector<Event> out;
    out.reserve(loaded.size());
    for (auto& le : loaded) out.push_back(std::move(le.event));
    return out;
}

std::vector<Event> delivery_order(std::vector<LoadedEvent> loaded) {
    std::stable_sort(loaded.begin(), loaded.end(), [](const LoadedEvent& a, const LoadedEvent& b) {
        if (a.event.arr_ms != b.event.arr_ms) return a.event.arr_ms < b.event.arr_ms;
        return a.partition < b.partition;
    });
    std::vector<Event> out;
    out.reserve(loaded.size());
    for (auto& le : loaded) out.push_back(std::move(le.event));
    return out;
}

std::vector<Event> load_events(const std::string& path) {
    return arrival_order(load_event_file(path));
}

std::string ReplaySummary::to_json() const {
    ordered_json o;
    o["processed"] = processed;
    o["delivered"] = delivered;
    o["duplicates"] = duplicates;
    o["discarded"] = discarded;
    o["removed"] = removed;
    o["emissions"] = emissions;
    o["adds"] = adds;
    o["corrections"] = corrections;
    o["invalidations"] = invalidations;
    return o.dump();
}

ReplaySummary replay(const std::vector<Event>& sequence, Engine& engine,
                     std::vector<OutputEvent>& sink) {
    ReplaySummary summary;
    auto absorb = [&](std::vector<OutputEvent>&& emissions) {
        for (auto& e : emissions) {
            ++summary.emissions;
            switch (e.kind) {
                case EmissionKind::Add: ++summary.adds; break;
                case EmissionKind::Correct: ++summary.corrections; break;
                case EmissionKind::Invalidate: ++summary.invalidations; break;
            }
            sink.push_back(std::move(e));
        }
    };

    for (const Event& e : sequence) {
        ++summary.processed;
        absorb(engine.process(e));
    }
    absorb(engine.flush());

    summary.delivered = engine.counters().delivered;
    summary.duplicates = engine.counters().duplicates;
    summary.discarded = engine.counters().discarded;
    summary.removed = engine.counters().removed;
    return summary;
}

}  // namespace limecep
