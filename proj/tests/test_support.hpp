#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "limecep/dataset.hpp"
#include "limecep/event.hpp"
#include "limecep/match.hpp"
#include "limecep/pattern.hpp"

namespace testsupport {

using namespace limecep;

inline Event ev(const std::string& type, Timestamp gen_ms, Timestamp arr_ms = -1,
                std::string id = "", Payload payload = {}) {
    Event e;
    e.type = type;
    e.gen_ms = gen_ms;
    e.arr_ms = arr_ms < 0 ? gen_ms : arr_ms;
    e.id = id.empty() ? type + std::to_string(gen_ms) : std::move(id);
    e.source = type;
    e.payload = std::move(payload);
    return e;
}

inline PatternSpec pat(const std::string& text, SelectionPolicy policy = SelectionPolicy::Stnm,
                       const std::string& id = "p") {
    PatternSpec p = parse_pattern(text, id);
    p.policy = policy;
    return p;
}

// "a3 b8 c10" -> events with gen = number * 1000 and type from the letter.
inline std::vector<Event> stream(const std::string& compact) {
    std::vector<Event> events;
    std::stringstream ss(compact);
    std::string token;
    while (ss >> token) {
        std::string type(1, static_cast<char>(std::toupper(token[0])));
        Timestamp n = std::stoll(token.substr(1));
        events.push_back(ev(type, n * 1000, n * 1000, token));
    }
    return events;
}

inline EventSet keys(const std::vector<Event>& events) {
    EventSet out = event_set(events);
    std::sort(out.begin(), out.end());
    return out;
}

inline EventSet keys_str(const std::string& compact) { return keys(stream(compact)); }

inline std::set<EventSet> key_sets(const std::vector<MatchRecord>& matches) {
    std::set<EventSet> out;
    for (const auto& m : matches) out.insert(m.keys());
    return out;
}

inline std::set<EventSet> expect_sets(std::initializer_list<std::string> compacts) {
    std::set<EventSet> out;
    for (const auto& c : compacts) out.insert(keys_str(c));
    return out;
}

// The known 20-event fixture: generation order b1 b2 a3 ... c19 c20 with one
// second between consecutive generations, replayed in a disordered arrival
// order with one second between consecutive arrivals.
inline const char* kFixtureGenOrder =
    "b1 b2 a3 a4 a5 a6 a7 b8 a9 c10 b11 b12 a13 b14 a15 b16 a17 a18 c19 c20";
inline const char* kFixtureArrivalOrder =
    "b1 b2 b11 a3 c10 a4 a6 c20 a5 a18 a7 b8 a17 a9 a13 b14 b16 a15 c19 b12";

inline std::vector<Event> fixture_arrivals() {
    std::vector<Event> events = stream(kFixtureArrivalOrder);
    for (std::size_t i = 0; i < events.size(); ++i)
        events[i].arr_ms = static_cast<Timestamp>(i + 1) * 1000;
    return events;
}

inline std::vector<Event> fixture_in_order() { return stream(kFixtureGenOrder); }

}  // namespace testsupport
