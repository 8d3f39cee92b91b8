#include "limecep/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "limecep/errors.hpp"

namespace limecep {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<LoadedEvent> base_iid(const DatasetSpec& spec, Rng& rng) {
    struct Source {
        const TypeSpec* type;
        Timestamp next_ms;
        std::size_t seq = 0;
    };
    std::vector<Source> sources;
    for (const auto& t : spec.type_alphabet) {
        Timestamp first = 1 + static_cast<Timestamp>(rng.unit() * t.mean_gap_s * 1000.0);
        sources.push_back(Source{&t, first});
    }

    std::vector<LoadedEvent> events;
    while (events.size() < spec.n_events) {
        std::size_t pick = 0;
        for (std::size_t i = 1; i < sources.size(); ++i)
            if (sources[i].next_ms < sources[pick].next_ms) pick = i;
        Source& s = sources[pick];

        LoadedEvent le;
        le.event.type = s.type->name;
        le.event.source = s.type->name;
        le.event.id = s.type->name + std::to_string(++s.seq);
        le.event.gen_ms = s.next_ms;
        le.event.arr_ms = s.next_ms;
        le.event.payload["value"] = static_cast<double>(events.size() + 1);
        events.push_back(std::move(le));

        double gap_s = s.type->mean_gap_s * (0.5 + rng.unit());
        s.next_ms += std::max<Timestamp>(1, static_cast<Timestamp>(std::llround(gap_s * 1000.0)));
    }
    return events;
}

std::vector<LoadedEvent> base_clusters(const DatasetSpec& spec, Rng& rng) {
    const ClusterLayout& layout = *spec.cluster;
    std::vector<LoadedEvent> events;
    std::size_t cluster_idx = 0;
    std::vector<std::size_t> seq(spec.type_alphabet.size(), 0);
    while (events.size() < spec.n_events) {
        Timestamp base = 1000 + static_cast<Timestamp>(cluster_idx) * layout.gap_ms;
        for (std::size_t j = 0; j < spec.type_alphabet.size() && events.size() < spec.n_events; ++j) {
            LoadedEvent le;
            const TypeSpec& t = spec.type_alphabet[j];
            le.event.type = t.name;
            le.event.source = t.name;
            le.event.id = t.name + std::to_string(++seq[j]);
            Timestamp jitter = static_cast<Timestamp>(rng.below(
                static_cast<std::uint64_t>(std::max<Timestamp>(1, layout.step_ms / 4))));
            le.event.gen_ms = base + static_cast<Timestamp>(j) * layout.step_ms + jitter;
            le.event.arr_ms = le.event.gen_ms;
            le.event.payload["value"] = static_cast<double>(events.size() + 1);
            events.push_back(std::move(le));
        }
        ++cluster_idx;
    }
    return events;
}

}  // namespace

std::vector<LoadedEvent> generate_events(const DatasetSpec& spec) {
    if (spec.type_alphabet.empty()) throw ConfigError("dataset needs at least one event type");
    Rng rng(spec.seed);

    std::vector<LoadedEvent> events =
        spec.cluster ? base_clusters(spec, rng) : base_iid(spec, rng);

    if (spec.ooo_probability > 0.0 && spec.max_displacement_ms > 0) {
        for (auto& le : events) {
            if (rng.unit() >= spec.ooo_probability) continue;
            le.event.arr_ms +=
                1 + static_cast<Timestamp>(rng.below(static_cast<std::uint64_t>(spec.max_displacement_ms)));
        }
    }

    for (std::size_t d = 0; d < spec.duplicate_count && !events.empty(); ++d) {
        LoadedEvent copy = events[rng.below(events.size())];
        Timestamp shift = spec.max_displacement_ms > 0 ? spec.max_displacement_ms
                                                       : std::max<Timestamp>(1, copy.event.gen_ms / 4);
        copy.event.arr_ms += 1 + static_cast<Timestamp>(rng.below(static_cast<std::uint64_t>(shift)));
        events.push_back(std::move(copy));
    }

    std::stable_sort(events.begin(), events.end(), [](const LoadedEvent& a, const LoadedEvent& b) {
        return a.event.arr_ms < b.event.arr_ms;
    });
    for (std::size_t i = 0; i < events.size(); ++i) events[i].line = i + 1;
    return events;
}

void write_event_file(const std::string& path, const std::vector<LoadedEvent>& events) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write event file: " + path);
    for (const auto& le : events) {
        ordered_json o;
        o["id"] = le.event.id;
        o["type"] = le.event.type;
        o["t_gen_ms"] = le.event.gen_ms;
        o["t_arr_ms"] = le.event.arr_ms;
        o["source"] = le.event.source;
        o["partition"] = le.partition;
        ordered_json payload = ordered_json::object();
        for (const auto& [k, v] : le.event.payload) {
            if (std::holds_alternative<double>(v))
                payload[k] = std::get<double>(v);
            else
                payload[k] = std::get<std::string>(v);
        }
        o["payload"] = std::move(payload);
        os << o.dump() << "\n";
    }
}

void generate_dataset(const DatasetSpec& spec, const std::string& path) {
    write_event_file(path, generate_events(spec));
}

DatasetSpec dataset_spec_from_json(const std::string& json_text) {
    ordered_json o = ordered_json::parse(json_text);
    DatasetSpec spec;
    spec.n_events = o.at("n_events").get<std::size_t>();
    for (const auto& t : o.at("types")) {
        TypeSpec ts;
        ts.name = t.at("name").get<std::string>();
        ts.mean_gap_s = t.value("mean_gap_s", 1.0);
        spec.type_alphabet.push_back(std::move(ts));
    }
    spec.seed = o.value("seed", std::uint64_t{1});
    spec.ooo_probability = o.value("ooo_probability", 0.0);
    spec.max_displacement_ms = o.value("max_displacement_ms", Timestamp{0});
    spec.duplicate_count = o.value("duplicate_count", std::size_t{0});
    if (o.contains("cluster")) {
        ClusterLayout layout;
        layout.gap_ms = o.at("cluster").value("gap_ms", Timestamp{30'000});
        layout.step_ms = o.at("cluster").value("step_ms", Timestamp{1'000});
        spec.cluster = layout;
    }
    return spec;
}

DatasetSpec dataset_spec_from_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open dataset spec: " + path);
    std::stringstream buffer;
    buffer << is.rdbuf();
    return dataset_spec_from_json(buffer.str());
}

}  // namespace limecep
