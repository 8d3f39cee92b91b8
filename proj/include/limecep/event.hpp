#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace limecep {

// Logical timestamps are millisecond counts; formulas convert to seconds as doubles.
using Timestamp = std::int64_t;

inline double to_seconds(Timestamp ms) { return static_cast<double>(ms) / 1000.0; }

// Payload scalars: numeric values compare numerically, strings lexicographically.
using Value = std::variant<double, std::string>;
using Payload = std::map<std::string, Value>;

struct Event {
    std::string id;
    std::string type;     // event-type name
    Timestamp gen_ms = 0; // generation time
    Timestamp arr_ms = 0; // arrival time (clock skew permitted, may precede gen_ms)
    std::string source;
    Payload payload;
};

// Identity key and total-order key coincide: (gen, type, id).
// Equal keys denote the same event; ties beyond gen_ms are broken lexicographically.
struct EventKey {
    Timestamp gen_ms = 0;
    std::string type;
    std::string id;

    auto operator<=>(const EventKey&) const = default;
};

inline EventKey key_of(const Event& e) { return EventKey{e.gen_ms, e.type, e.id}; }

inline bool same_event(const Event& a, const Event& b) { return key_of(a) == key_of(b); }

// Strict total order over events: gen_ms, then type name, then id.
inline bool precedes(const Event& a, const Event& b) { return key_of(a) < key_of(b); }

struct EventOrderLess {
    bool operator()(const Event& a, const Event& b) const { return precedes(a, b); }
};

using EventSet = std::vector<EventKey>; // canonical: sorted ascending

inline EventSet event_set(const std::vector<Event>& events) {
    EventSet keys;
    keys.reserve(events.size());
    for (const auto& e : events) keys.push_back(key_of(e));
    return keys;
}

}  // namespace limecep
