#pragma once

#include <map>
#include <optional>
#include <vector>

#include "limecep/event.hpp"
#include "limecep/match_engine.hpp"
#include "limecep/pattern.hpp"
#include "limecep/shared_index.hpp"
#include "limecep/stats.hpp"

namespace limecep {

struct Weights {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
};

struct ManagerConfig {
    Weights weights;
    double theta_multiplier = 2.5;
    double slack_ratio_threshold = 0.10;
    bool correction = true; // off: lazy end-trigger detection only, no revisions
};

enum class Lateness { InOrder, Late, ExtremelyLate };

struct Classification {
    Lateness kind = Lateness::InOrder;
    double score = 0.0;
};

// Disorder score of an arrival: 0 when the event does not precede the watermark,
// otherwise alpha*ln(1+lateness) + beta*rate_deviation^2 + gamma*window_share,
// with lateness = watermark - gen (seconds), rate_deviation = |estimated -
// actual| inter-arrival gap, window_share = actual gap / pattern window.
double ooo_score(const Event& e, const PatternSpec& pattern, const StreamStats& stats,
                 const Weights& weights);

// Strictly above the per-source threshold means extremely late (dropped for this
// pattern); a zero score means in-order.
Classification classify(const Event& e, const PatternSpec& pattern, const StreamStats& stats,
                        const ManagerConfig& cfg);

// True when a disordered arrival can change already-computed matches: it
// precedes the watermark and either is of the end type or precedes the last
// stored end event.
bool affects_prior(const Event& e, const PatternSpec& pattern, const SharedIndex& index,
                   const StreamStats& stats);

// The generation-time interval whose end events must be re-examined for `e`.
// Kleene positions look a full window forward; interior positions shrink both
// sides by the per-position share t = W/|elements|; the upper bound never drops
// below the watermark.
TimeInterval reprocessing_window(const Event& e, const PatternSpec& pattern, const StreamStats& stats);

// Deliberate reprocessing delay: disorder ratio times the pattern window.
Timestamp slack_duration_ms(const PatternSpec& pattern, const StreamStats& stats);

struct EngineAction {
    enum class Kind { TriggerEnd, TriggerOnDemand, Buffer, Discard };
    Kind kind = Kind::Buffer;
    Event trigger;
    TimeInterval reprocess{};   // TriggerOnDemand only
    Timestamp scheduled_at = 0; // equals `now` unless slack deferral applies
};

// Per-pattern orchestrator. Decides what an arrival triggers and keeps the
// deferred reprocessing queue, coalesced per end event (earliest due wins).
class EventManager {
  public:
    EventManager(const PatternSpec& pattern, ManagerConfig cfg)
        : pattern_(&pattern), cfg_(cfg) {}

    const PatternSpec& pattern() const { return *pattern_; }
    const ManagerConfig& config() const { return cfg_; }

    // Decision for one relevant arrival. `score` is this manager's disorder
    // score for `e` (already folded into the shared statistics). Deferred
    // on-demand triggers are queued internally and also returned.
    std::vector<EngineAction> on_event(const Event& e, double score, const SharedIndex& index,
                                       const StreamStats& stats, Timestamp now);

    void schedule_end(const EventKey& end, Timestamp due);
    // Pending entries due at or before `now`, in (due, end) order; removed.
    std::vector<std::pair<Timestamp, EventKey>> take_due(Timestamp now);
    std::vector<std::pair<Timestamp, EventKey>> take_all();
    std::optional<Timestamp> next_due() const;
    std::size_t pending_count() const { return pending_.size(); }

  private:
    const PatternSpec* pattern_;
    ManagerConfig cfg_;
    std::map<EventKey, Timestamp> pending_;
};

}  // namespace limecep
