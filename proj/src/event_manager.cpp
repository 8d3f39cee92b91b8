#include "limecep/event_manager.hpp"

#include <algorithm>
#include <cmath>

#include "limecep/errors.hpp"

namespace limecep {

double ooo_score(const Event& e, const PatternSpec& pattern, const StreamStats& stats,
                 const Weights& weights) {
    if (pattern.window_ms <= 0) throw ConfigError("pattern window must be positive");
    if (!stats.has_watermark() || e.gen_ms >= stats.lta_ms()) return 0.0;
    double lateness_s = to_seconds(stats.lta_ms() - e.gen_ms);
    double actual_s = stats.actual_gap_s(e.type);
    double rate_deviation = std::abs(stats.estimated_gap_s(e.type) - actual_s);
    double window_share = actual_s / to_seconds(pattern.window_ms);
    return weights.alpha * std::log1p(lateness_s) + weights.beta * rate_deviation * rate_deviation +
           weights.gamma * window_share;
}

Classification classify(const Event& e, const PatternSpec& pattern, const StreamStats& stats,
                        const ManagerConfig& cfg) {
    double score = ooo_score(e, pattern, stats, cfg.weights);
    if (score == 0.0) return {Lateness::InOrder, 0.0};
    if (score > stats.threshold(e.type, cfg.theta_multiplier)) return {Lateness::ExtremelyLate, score};
    return {Lateness::Late, score};
}

bool affects_prior(const Event& e, const PatternSpec& pattern, const SharedIndex& index,
                   const StreamStats& stats) {
    if (!stats.has_watermark() || e.gen_ms >= stats.lta_ms()) return false;
    if (e.type == pattern.end_type()) return true;
    auto last_end = index.last_of(pattern.end_type());
    return last_end.has_value() && e.gen_ms < last_end->gen_ms;
}

TimeInterval reprocessing_window(const Event& e, const PatternSpec& pattern, const StreamStats& stats) {
    auto idx = pattern.element_index(e.type);
    if (!idx) throw ConfigError("event type '" + e.type + "' is not part of pattern " + pattern.id);
    double window = static_cast<double>(pattern.window_ms);
    double ts = static_cast<double>(e.gen_ms);
    double watermark = stats.has_watermark() ? static_cast<double>(stats.lta_ms()) : ts;
    std::size_t count = pattern.elements.size();
    double share = window / static_cast<double>(count);
    double left_positions = static_cast<double>(*idx);
    double right_positions = static_cast<double>(count - 1 - *idx);

    double lo, hi;
    if (pattern.elements[*idx].kleene) {
        lo = ts - window + right_positions * share;
        hi = std::max(ts + window, watermark);
    } else if (*idx == 0) {
        lo = ts;
        hi = std::max(ts + window, watermark);
    } else if (*idx == count - 1) {
        lo = ts - window;
        hi = ts;
    } else {
        lo = ts - window + right_positions * share;
        hi = std::max(ts + window - left_positions * share, watermark);
    }
    return {static_cast<Timestamp>(std::floor(lo)), static_cast<Timestamp>(std::ceil(hi))};
}

Timestamp slack_duration_ms(const PatternSpec& pattern, const StreamStats& stats) {
    return static_cast<Timestamp>(
        std::llround(stats.ooo_ratio() * static_cast<double>(pattern.window_ms)));
}

std::vector<EngineAction> EventManager::on_event(const Event& e, double score,
                                                 const SharedIndex& index, const StreamStats& stats,
                                                 Timestamp now) {
    EngineAction action;
    action.trigger = e;
    action.scheduled_at = now;

    if (!pattern_->has_type(e.type)) {
        action.kind = EngineAction::Kind::Discard;
        return {action};
    }
    if (score > 0.0 && score > stats.threshold(e.type, cfg_.theta_multiplier)) {
        action.kind = EngineAction::Kind::Discard;
        return {action};
    }
    if (e.type == pattern_->end_type()) {
        // End arrivals always drive detection, however late they are.
        action.kind = EngineAction::Kind::TriggerEnd;
        return {action};
    }
    if (score > 0.0 && cfg_.correction && affects_prior(e, *pattern_, index, stats)) {
        action.kind = EngineAction::Kind::TriggerOnDemand;
        action.reprocess = reprocessing_window(e, *pattern_, stats);
        if (stats.ooo_ratio() >= cfg_.slack_ratio_threshold) {
            action.scheduled_at = now + slack_duration_ms(*pattern_, stats);
            for (const Event& end :
                 index.range(pattern_->end_type(), action.reprocess.start_ms, action.reprocess.end_ms))
                schedule_end(key_of(end), action.scheduled_at);
        }
        return {action};
    }
    action.kind = EngineAction::Kind::Buffer;
    return {action};
}

void EventManager::schedule_end(const EventKey& end, Timestamp due) {
    auto [it, inserted] = pending_.try_emplace(end, due);
    if (!inserted) it->second = std::min(it->second, due);
}

std::vector<std::pair<Timestamp, EventKey>> EventManager::take_due(Timestamp now) {
    std::vector<std::pair<Timestamp, EventKey>> due;
    for (auto it = pending_.begin(); it != pending_.end();) {
        if (it->second <= now) {
            due.emplace_back(it->second, it->first);
            it = pending_.erase(it);
        } else {
            ++it;
        }
    }
    std::sort(due.begin(), due.end());
    return due;
}

std::vector<std::pair<Timestamp, EventKey>> EventManager::take_all() {
    std::vector<std::pair<Timestamp, EventKey>> all;
    for (const auto& [key, at] : pending_) all.emplace_back(at, key);
    pending_.clear();
    std::sort(all.begin(), all.end());
    return all;
}

std::optional<Timestamp> EventManager::next_due() const {
    std::optional<Timestamp> best;
    for (const auto& [key, at] : pending_)
        if (!best || at < *best) best = at;
    return best;
}

}  // namespace limecep
