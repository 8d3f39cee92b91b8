#include "limecep/stats.hpp"

#include <algorithm>

#include <json.hpp>

namespace limecep {

namespace {

void fold_time(StreamStats::TimeAggregate& agg, double seconds) {
    agg.min_s = std::min(agg.min_s, seconds);
    agg.max_s = std::max(agg.max_s, seconds);
    agg.sum_s += seconds;
    ++agg.count;
}

}  // namespace

void StreamStats::record_event(const Event& e, double ooo_time_s) {
    PerType& t = per_type_[e.type];
    ++ne_all_;
    ++t.events;
    if (t.last_arr_ms) {
        t.gap_sum_s += to_seconds(e.arr_ms - *t.last_arr_ms);
        ++t.gap_count;
    }
    t.last_arr_ms = e.arr_ms;
    if (ooo_time_s > 0) {
        ++no_all_;
        ++t.ooo;
        fold_time(ooo_time_all_, ooo_time_s);
        fold_time(t.ooo_time, ooo_time_s);
    }
    if (!has_lta_ || e.gen_ms > lta_ms_) {
        lta_ms_ = e.gen_ms;
        has_lta_ = true;
    }
}

void StreamStats::record_ooo_score(const std::string& type, double score) {
    PerType& t = per_type_[type];
    t.score_sum += score;
    ++t.score_count;
}

void StreamStats::record_arrival(const Event& e, double ooo_time_s, double ooo_score) {
    record_event(e, ooo_time_s);
    if (ooo_time_s > 0) record_ooo_score(e.type, ooo_score);
}

double StreamStats::threshold(const std::string& type, double multiplier) const {
    if (multiplier == 0.0) return 0.0;
    auto it = per_type_.find(type);
    if (it == per_type_.end() || it->second.score_count == 0)
        return std::numeric_limits<double>::infinity();
    return multiplier * (it->second.score_sum / static_cast<double>(it->second.score_count));
}

double StreamStats::ooo_ratio() const {
    return static_cast<double>(no_all_) / static_cast<double>(std::max<std::uint64_t>(1, ne_all_));
}

double StreamStats::ooo_time_s(const Event& e) const {
    if (!has_lta_ || e.gen_ms >= lta_ms_) return 0.0;
    return to_seconds(lta_ms_ - e.gen_ms);
}

double StreamStats::actual_gap_s(const std::string& type) const {
    auto it = per_type_.find(type);
    if (it == per_type_.end() || it->second.gap_count == 0) return sources_.estimated_for(type);
    return it->second.gap_sum_s / static_cast<double>(it->second.gap_count);
}

std::uint64_t StreamStats::events_of(const std::string& type) const {
    auto it = per_type_.find(type);
    return it == per_type_.end() ? 0 : it->second.events;
}

std::uint64_t StreamStats::ooo_of(const std::string& type) const {
    auto it = per_type_.find(type);
    return it == per_type_.end() ? 0 : it->second.ooo;
}

double StreamStats::avg_ooo_score(const std::string& type) const {
    auto it = per_type_.find(type);
    if (it == per_type_.end() || it->second.score_count == 0) return 0.0;
    return it->second.score_sum / static_cast<double>(it->second.score_count);
}

const StreamStats::TimeAggregate* StreamStats::ooo_time_of(const std::string& type) const {
    auto it = per_type_.find(type);
    return it == per_type_.end() ? nullptr : &it->second.ooo_time;
}

std::string StreamStats::snapshot_json() const {
    nlohmann::ordered_json o;
    o["ne_all"] = ne_all_;
    o["no_all"] = no_all_;
    o["ooo_ratio"] = ooo_ratio();
    if (has_lta_) o["lta_ms"] = lta_ms_;
    if (ooo_time_all_.count > 0) {
        o["min_ooo_s"] = ooo_time_all_.min_s;
        o["avg_ooo_s"] = ooo_time_all_.mean_s();
        o["max_ooo_s"] = ooo_time_all_.max_s;
    }
    nlohmann::ordered_json types = nlohmann::ordered_json::object();
    for (const auto& [type, t] : per_type_) {
        nlohmann::ordered_json entry;
        entry["ne"] = t.events;
        entry["no"] = t.ooo;
        entry["esar_s"] = sources_.estimated_for(type);
        entry["acar_s"] = actual_gap_s(type);
        if (t.ooo_time.count > 0) {
            entry["min_ooo_s"] = t.ooo_time.min_s;
            entry["avg_ooo_s"] = t.ooo_time.mean_s();
            entry["max_ooo_s"] = t.ooo_time.max_s;
        }
        if (t.score_count > 0) entry["avg_ooo_score"] = t.score_sum / static_cast<double>(t.score_count);
        types[type] = std::move(entry);
    }
    o["per_type"] = std::move(types);
    return o.dump();
}

}  // namespace limecep
