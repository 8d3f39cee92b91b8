#include "limecep/engine.hpp"

#include <algorithm>

#include "limecep/errors.hpp"
#include "limecep/match_engine.hpp"

namespace limecep {

std::pair<std::map<std::string, std::vector<std::string>>,
          std::map<std::string, std::vector<std::string>>>
register_mapping(const std::vector<PatternSpec>& patterns) {
    std::map<std::string, std::vector<std::string>> forward;
    std::map<std::string, std::vector<std::string>> inverted;
    for (const auto& p : patterns) {
        auto& types = forward[p.id];
        for (const auto& el : p.elements) {
            types.push_back(el.type);
            inverted[el.type].push_back(p.id);
        }
    }
    return {forward, inverted};
}

Engine::Engine(EngineConfig config)
    : patterns_(std::move(config.patterns)),
      sources_(std::move(config.sources)),
      maintenance_interval_(config.maintenance_interval),
      stats_(sources_) {
    if (patterns_.empty()) throw ConfigError("engine needs at least one pattern");

    Timestamp max_window = 0;
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
        const PatternSpec& p = patterns_[i];
        for (std::size_t j = i + 1; j < patterns_.size(); ++j)
            if (patterns_[j].id == p.id) throw ConfigError("duplicate pattern id '" + p.id + "'");
        for (const auto& el : p.elements) {
            if (sources_.estimated_gap_s.count(el.type) == 0)
                throw ConfigError("pattern '" + p.id + "' references undeclared source type '" +
                                  el.type + "'");
            type_to_patterns_[el.type].push_back(p.id);
            type_to_indices_[el.type].push_back(i);
        }
        max_window = std::max(max_window, p.window_ms);

        ManagerConfig cfg = config.manager;
        auto it = config.per_pattern.find(p.id);
        if (it != config.per_pattern.end()) cfg = it->second;
        if (cfg.weights.alpha < 0 || cfg.weights.beta < 0 || cfg.weights.gamma < 0)
            throw ConfigError("score weights must be nonnegative");
        if (cfg.slack_ratio_threshold < 0 || cfg.slack_ratio_threshold > 1)
            throw ConfigError("slack ratio threshold must lie in [0,1]");
        if (cfg.theta_multiplier < 0) throw ConfigError("threshold multiplier must be nonnegative");
        managers_.push_back(std::make_unique<EventManager>(p, cfg));
        results_.push_back(std::make_unique<ResultManager>(p, cfg.correction));
    }
    // Window plus the slack upper bound (one more window), doubled.
    index_.set_retention_ms(config.retention_ms.value_or(4 * max_window));
}

const ResultManager& Engine::result_manager(const std::string& pattern_id) const {
    for (std::size_t i = 0; i < patterns_.size(); ++i)
        if (patterns_[i].id == pattern_id) return *results_[i];
    throw ConfigError("unknown pattern id '" + pattern_id + "'");
}

std::vector<OutputEvent> Engine::fire_pending(std::size_t pattern_idx, Timestamp at,
                                              const EventKey& end_key) {
    const PatternSpec& pattern = patterns_[pattern_idx];
    const OrderedEventStore* store = index_.store(end_key.type);
    if (store == nullptr || !store->contains(end_key)) return {}; // evicted meanwhile

    Event end;
    for (const Event& candidate : index_.range(end_key.type, end_key.gen_ms, end_key.gen_ms))
        if (key_of(candidate) == end_key) end = candidate;

    ++counters_.triggers_on_demand;
    std::vector<OutputEvent> out;
    for (auto& m : detect_from_end(build_request(pattern, end, index_))) {
        m.ooo = true;
        for (auto& emission : results_[pattern_idx]->submit(m, at))
            out.push_back(std::move(emission));
    }
    return out;
}

std::vector<OutputEvent> Engine::fire_due(Timestamp horizon) {
    std::vector<std::tuple<Timestamp, std::size_t, EventKey>> due;
    for (std::size_t i = 0; i < managers_.size(); ++i)
        for (auto& [at, key] : managers_[i]->take_due(horizon)) due.emplace_back(at, i, key);
    std::sort(due.begin(), due.end());

    std::vector<OutputEvent> out;
    for (auto& [at, idx, key] : due) {
        now_ = std::max(now_, at);
        for (auto& emission : fire_pending(idx, std::max(now_, at), key))
            out.push_back(std::move(emission));
    }
    return out;
}

std::vector<OutputEvent> Engine::process(const Event& e) {
    Timestamp arrival = clock_started_ ? std::max(now_, e.arr_ms) : e.arr_ms;
    std::vector<OutputEvent> out = fire_due(arrival);
    now_ = arrival;
    clock_started_ = true;

    if (index_.insert(e) == InsertOutcome::Duplicate) {
        ++counters_.duplicates;
        return out;
    }
    ++counters_.delivered;

    double ooo_s = stats_.ooo_time_s(e);
    stats_.record_event(e, ooo_s);

    auto interested = type_to_indices_.find(e.type);
    if (interested == type_to_indices_.end()) return out;

    std::size_t extl_count = 0;
    for (std::size_t idx : interested->second) {
        EventManager& em = *managers_[idx];
        double score = ooo_score(e, patterns_[idx], stats_, em.config().weights);
        if (ooo_s > 0) stats_.record_ooo_score(e.type, score);

        for (const EngineAction& action : em.on_event(e, score, index_, stats_, now_)) {
            switch (action.kind) {
                case EngineAction::Kind::Discard:
                    ++counters_.discarded;
                    ++extl_count;
                    break;
                case EngineAction::Kind::Buffer:
                    ++counters_.buffered;
                    break;
                case EngineAction::Kind::TriggerEnd: {
                    ++counters_.triggers_end;
                    for (auto& m : detect_from_end(build_request(patterns_[idx], e, index_))) {
                        m.ooo = ooo_s > 0;
                        for (auto& emission : results_[idx]->submit(m, now_))
                            out.push_back(std::move(emission));
                    }
                    break;
                }
                case EngineAction::Kind::TriggerOnDemand: {
                    if (action.scheduled_at > now_) break; // queued inside the manager
                    ++counters_.triggers_on_demand;
                    for (auto& m : detect_on_demand(patterns_[idx], index_, action.reprocess, e))
                        for (auto& emission : results_[idx]->submit(m, now_))
                            out.push_back(std::move(emission));
                    break;
                }
            }
        }
    }

    // An event extremely late for every interested pattern leaves the index.
    if (extl_count > 0 && extl_count == interested->second.size()) {
        index_.remove(e);
        ++counters_.removed;
    }

    if (++since_maintenance_ >= maintenance_interval_) maintain();
    return out;
}

std::vector<OutputEvent> Engine::flush() {
    std::vector<std::tuple<Timestamp, std::size_t, EventKey>> all;
    for (std::size_t i = 0; i < managers_.size(); ++i)
        for (auto& [at, key] : managers_[i]->take_all()) all.emplace_back(at, i, key);
    std::sort(all.begin(), all.end());

    std::vector<OutputEvent> out;
    for (auto& [at, idx, key] : all) {
        now_ = std::max(now_, at);
        for (auto& emission : fire_pending(idx, now_, key)) out.push_back(std::move(emission));
    }
    return out;
}

void Engine::maintain() {
    since_maintenance_ = 0;
    index_.evict(now_);
    for (auto& rm : results_) rm->expire(now_);
}

}  // namespace limecep
