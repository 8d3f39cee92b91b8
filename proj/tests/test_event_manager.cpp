#include <doctest.h>

#include <cmath>
#include <limits>

#include "limecep/errors.hpp"
#include "limecep/event_manager.hpp"
#include "test_support.hpp"

using namespace limecep;
using testsupport::ev;
using testsupport::pat;

namespace {

// Watermark 13s, actual gap 1s (two arrivals 1s apart), estimate 1.5s.
StreamStats scoring_stats() {
    SourceConfig sources;
    sources.estimated_gap_s["A"] = 1.5;
    sources.estimated_gap_s["C"] = 1.0;
    StreamStats stats(sources);
    stats.record_arrival(ev("A", 10000, 10000), 0.0, 0.0);
    stats.record_arrival(ev("A", 13000, 11000), 0.0, 0.0);
    return stats;
}

}  // namespace

TEST_CASE("in-order arrivals score zero") {
    StreamStats stats = scoring_stats();
    PatternSpec p = pat("PATTERN SEQ(A a, C c) WITHIN 10 seconds");
    CHECK(ooo_score(ev("A", 14000), p, stats, Weights{}) == 0.0);
    CHECK(ooo_score(ev("A", 13000), p, stats, Weights{}) == 0.0);
}

TEST_CASE("late arrivals combine lateness, rate deviation and window share") {
    StreamStats stats = scoring_stats();
    PatternSpec p = pat("PATTERN SEQ(A a, C c) WITHIN 10 seconds");
    // lateness 3s, |1.5 - 1.0|^2 = 0.25, 1.0/10 = 0.1
    double expected = std::log(4.0) + 0.25 + 0.1;
    CHECK(ooo_score(ev("A", 10000), p, stats, Weights{}) == doctest::Approx(expected));
}

TEST_CASE("zero weights produce a zero score for any late event") {
    StreamStats stats = scoring_stats();
    PatternSpec p = pat("PATTERN SEQ(A a, C c) WITHIN 10 seconds");
    CHECK(ooo_score(ev("A", 1000), p, stats, Weights{0, 0, 0}) == 0.0);
}

TEST_CASE("scaling all weights scales the score") {
    StreamStats stats = scoring_stats();
    PatternSpec p = pat("PATTERN SEQ(A a, C c) WITHIN 10 seconds");
    double base = ooo_score(ev("A", 10000), p, stats, Weights{1, 1, 1});
    double scaled = ooo_score(ev("A", 10000), p, stats, Weights{3, 3, 3});
    CHECK(scaled == doctest::Approx(3.0 * base));
}

TEST_CASE("classification splits on zero score and the threshold") {
    StreamStats stats = scoring_stats();
    PatternSpec p = pat("PATTERN SEQ(A a, C c) WITHIN 10 seconds");
    ManagerConfig cfg;

    CHECK(classify(ev("A", 14000), p, stats, cfg).kind == Lateness::InOrder);
    // one prior score of 0.8 -> threshold 2.0
    stats.record_ooo_score("A", 0.8);
    Classification late = classify(ev("A", 10000), p, stats, cfg); // score ~1.736
    CHECK(late.kind == Lateness::Late);
    Classification extl = classify(ev("A", 4000), p, stats, cfg); // score ~2.65
    CHECK(extl.kind == Lateness::ExtremelyLate);
    CHECK(extl.score > 2.0);
}

TEST_CASE("score is zero exactly when classified in-order") {
    StreamStats stats = scoring_stats();
    PatternSpec p = pat("PATTERN SEQ(A a, C c) WITHIN 10 seconds");
    ManagerConfig cfg;
    for (Timestamp gen = 1000; gen <= 15000; gen += 500) {
        Classification c = classify(ev("A", gen), p, stats, cfg);
        CHECK((c.score == 0.0) == (c.kind == Lateness::InOrder));
    }
}

TEST_CASE("zero window is a configuration error") {
    StreamStats stats = scoring_stats();
    PatternSpec p = pat("PATTERN SEQ(A a, C c) WITHIN 10 seconds");
    p.window_ms = 0;
    CHECK_THROWS_AS((void)ooo_score(ev("A", 10000), p, stats, Weights{}), ConfigError);
}

TEST_CASE("affects_prior needs disorder plus an affected end") {
    PatternSpec p = pat("PATTERN SEQ(A a, B[] b+, C c) WITHIN 10 seconds");
    SourceConfig sources;
    sources.estimated_gap_s = {{"A", 1.0}, {"B", 1.0}, {"C", 1.0}};
    StreamStats stats(sources);
    SharedIndex index;

    stats.record_arrival(ev("C", 10000), 0.0, 0.0);
    index.insert(ev("C", 10000, 10000, "c10"));
    stats.record_arrival(ev("C", 20000), 0.0, 0.0);
    index.insert(ev("C", 20000, 20000, "c20"));

    CHECK(affects_prior(ev("B", 8000), p, index, stats));       // 8 < 20
    CHECK_FALSE(affects_prior(ev("A", 25000), p, index, stats)); // in order
    CHECK(affects_prior(ev("C", 15000), p, index, stats));       // end type

    StreamStats late_watermark(sources);
    late_watermark.record_arrival(ev("A", 25000), 0.0, 0.0);
    SharedIndex with_end;
    with_end.insert(ev("C", 20000, 20000, "c20"));
    CHECK_FALSE(affects_prior(ev("A", 21000), p, with_end, late_watermark)); // 21 >= 20

    SharedIndex empty;
    CHECK_FALSE(affects_prior(ev("B", 8000), p, empty, stats)); // no end stored
}

TEST_CASE("reprocessing window for an interior element") {
    PatternSpec p = pat("PATTERN SEQ(A a, B b, C c, D d) WITHIN 10 seconds");
    SourceConfig sources;
    sources.estimated_gap_s = {{"A", 1}, {"B", 1}, {"C", 1}, {"D", 1}};
    StreamStats stats(sources);
    stats.record_arrival(ev("D", 104'000), 0.0, 0.0);

    TimeInterval w = reprocessing_window(ev("B", 100'000), p, stats);
    CHECK(w.start_ms == 95'000);  // ts - W + 2 * W/4
    CHECK(w.end_ms == 107'500);   // max(ts + W - 1 * W/4, watermark)
}

TEST_CASE("reprocessing window for end and start elements") {
    PatternSpec p = pat("PATTERN SEQ(A a, B b, C c, D d) WITHIN 10 seconds");
    SourceConfig sources;
    sources.estimated_gap_s = {{"A", 1}, {"B", 1}, {"C", 1}, {"D", 1}};
    StreamStats end_stats(sources);
    end_stats.record_arrival(ev("D", 104'000), 0.0, 0.0);
    TimeInterval end = reprocessing_window(ev("D", 100'000), p, end_stats);
    CHECK(end.start_ms == 90'000);
    CHECK(end.end_ms == 100'000);

    StreamStats start_stats(sources);
    start_stats.record_arrival(ev("D", 115'000), 0.0, 0.0);
    TimeInterval start = reprocessing_window(ev("A", 100'000), p, start_stats);
    CHECK(start.start_ms == 100'000);
    CHECK(start.end_ms == 115'000);
}

TEST_CASE("reprocessing window for a Kleene element reaches the watermark") {
    PatternSpec p = pat("PATTERN SEQ(A a, B[] b+, C c) WITHIN 10 seconds");
    SourceConfig sources;
    sources.estimated_gap_s = {{"A", 1}, {"B", 1}, {"C", 1}};
    StreamStats stats(sources);
    stats.record_arrival(ev("C", 20'000), 0.0, 0.0);

    TimeInterval w = reprocessing_window(ev("B", 8'000), p, stats);
    CHECK(w.start_ms == 1'333); // ts - W + 1 * W/3, floored
    CHECK(w.end_ms == 20'000);  // max(ts + W, watermark)
    CHECK(w.contains(10'000));
    CHECK(w.contains(20'000));

    CHECK_THROWS_AS((void)reprocessing_window(ev("Z", 8'000), p, stats), ConfigError);
}

TEST_CASE("reprocessing windows contain the event for non-start cases") {
    PatternSpec p = pat("PATTERN SEQ(A a, B[] b+, C c) WITHIN 10 seconds");
    SourceConfig sources;
    sources.estimated_gap_s = {{"A", 1}, {"B", 1}, {"C", 1}};
    StreamStats stats(sources);
    stats.record_arrival(ev("C", 50'000), 0.0, 0.0);
    for (Timestamp ts : {20'000, 30'000, 45'000}) {
        for (const char* type : {"B", "C"}) {
            TimeInterval w = reprocessing_window(ev(type, ts), p, stats);
            CHECK(w.start_ms <= ts);
            CHECK(ts <= w.end_ms);
            CHECK(w.start_ms <= w.end_ms);
        }
    }
}

TEST_CASE("slack is the disorder ratio share of the window") {
    PatternSpec p = pat("PATTERN SEQ(A a, C c) WITHIN 60 seconds");
    SourceConfig sources;
    sources.estimated_gap_s = {{"A", 1}, {"C", 1}};
    StreamStats stats(sources);
    for (int i = 0; i < 85; ++i) stats.record_arrival(ev("A", 1000 * (i + 1)), 0.0, 0.0);
    for (int i = 0; i < 15; ++i) stats.record_arrival(ev("A", 10, 90'000), 1.0, 0.5);
    CHECK(slack_duration_ms(p, stats) == 9'000);

    StreamStats inorder(sources);
    inorder.record_arrival(ev("A", 1000), 0.0, 0.0);
    CHECK(slack_duration_ms(p, inorder) == 0);
}

TEST_CASE("end arrivals trigger detection regardless of lateness") {
    PatternSpec p = pat("PATTERN SEQ(A a, B[] b+, C c) WITHIN 10 seconds");
    SourceConfig sources;
    sources.estimated_gap_s = {{"A", 1}, {"B", 1}, {"C", 1}};
    StreamStats stats(sources);
    SharedIndex index;
    stats.record_arrival(ev("C", 20'000), 0.0, 0.0);
    index.insert(ev("C", 20'000));

    EventManager em(p, ManagerConfig{});
    auto actions = em.on_event(ev("C", 10'000), 1.0, index, stats, 21'000);
    REQUIRE(actions.size() == 1);
    CHECK(actions[0].kind == EngineAction::Kind::TriggerEnd);
}

TEST_CASE("irrelevant and extremely late events are discarded") {
    PatternSpec p = pat("PATTERN SEQ(A a, B[] b+, C c) WITHIN 10 seconds");
    SourceConfig sources;
    sources.estimated_gap_s = {{"A", 1}, {"B", 1}, {"C", 1}};
    StreamStats stats(sources);
    SharedIndex index;
    EventManager em(p, ManagerConfig{});

    auto irrelevant = em.on_event(ev("D", 1'000), 0.0, index, stats, 1'000);
    CHECK(irrelevant[0].kind == EngineAction::Kind::Discard);

    stats.record_ooo_score("B", 0.1); // threshold 0.25
    auto extreme = em.on_event(ev("B", 1'000), 5.0, index, stats, 2'000);
    CHECK(extreme[0].kind == EngineAction::Kind::Discard);
}

TEST_CASE("late affecting events trigger on-demand reprocessing") {
    PatternSpec p = pat("PATTERN SEQ(A a, B[] b+, C c) WITHIN 10 seconds");
    SourceConfig sources;
    sources.estimated_gap_s = {{"A", 1}, {"B", 1}, {"C", 1}};
    StreamStats stats(sources);
    SharedIndex index;
    stats.record_arrival(ev("C", 20'000), 0.0, 0.0);
    index.insert(ev("C", 20'000, 20'000, "c20"));

    EventManager em(p, ManagerConfig{});
    auto actions = em.on_event(ev("B", 8'000), 1.0, index, stats, 21'000);
    REQUIRE(actions.size() == 1);
    CHECK(actions[0].kind == EngineAction::Kind::TriggerOnDemand);
    CHECK(actions[0].reprocess.contains(20'000));
    CHECK(actions[0].scheduled_at == 21'000); // no disorder ratio yet, immediate
    CHECK(em.pending_count() == 0);
}

TEST_CASE("high disorder ratio defers on-demand triggers by the slack") {
    PatternSpec p = pat("PATTERN SEQ(A a, B[] b+, C c) WITHIN 10 seconds");
    SourceConfig sources;
    sources.estimated_gap_s = {{"A", 1}, {"B", 1}, {"C", 1}};
    StreamStats stats(sources);
    SharedIndex index;
    stats.record_arrival(ev("C", 20'000), 0.0, 0.0);
    stats.record_arrival(ev("A", 3'000, 21'000), 17.0, 1.0);
    index.insert(ev("C", 20'000, 20'000, "c20"));

    EventManager em(p, ManagerConfig{});
    auto actions = em.on_event(ev("B", 8'000), 1.0, index, stats, 22'000);
    REQUIRE(actions.size() == 1);
    CHECK(actions[0].kind == EngineAction::Kind::TriggerOnDemand);
    CHECK(actions[0].scheduled_at == 22'000 + slack_duration_ms(p, stats));
    CHECK(em.pending_count() == 1); // the stored end event, coalesced

    // a second trigger for the same end keeps the earliest due time
    em.schedule_end(EventKey{20'000, "C", "c20"}, 40'000);
    CHECK(em.pending_count() == 1);
    auto due = em.take_all();
    REQUIRE(due.size() == 1);
    CHECK(due[0].first == actions[0].scheduled_at);
}

TEST_CASE("buffered events produce no trigger") {
    PatternSpec p = pat("PATTERN SEQ(A a, B[] b+, C c) WITHIN 10 seconds");
    SourceConfig sources;
    sources.estimated_gap_s = {{"A", 1}, {"B", 1}, {"C", 1}};
    StreamStats stats(sources);
    SharedIndex index;
    EventManager em(p, ManagerConfig{});

    auto in_order = em.on_event(ev("B", 1'000), 0.0, index, stats, 1'000);
    CHECK(in_order[0].kind == EngineAction::Kind::Buffer);

    // late but no stored end event -> nothing to affect
    stats.record_arrival(ev("B", 30'000), 0.0, 0.0);
    auto unaffecting = em.on_event(ev("B", 8'000), 1.0, index, stats, 31'000);
    CHECK(unaffecting[0].kind == EngineAction::Kind::Buffer);
}

TEST_CASE("correction off keeps the engine lazy") {
    PatternSpec p = pat("PATTERN SEQ(A a, B[] b+, C c) WITHIN 10 seconds");
    SourceConfig sources;
    sources.estimated_gap_s = {{"A", 1}, {"B", 1}, {"C", 1}};
    StreamStats stats(sources);
    SharedIndex index;
    stats.record_arrival(ev("C", 20'000), 0.0, 0.0);
    index.insert(ev("C", 20'000, 20'000, "c20"));

    ManagerConfig cfg;
    cfg.correction = false;
    EventManager em(p, cfg);
    auto actions = em.on_event(ev("B", 8'000), 1.0, index, stats, 21'000);
    CHECK(actions[0].kind == EngineAction::Kind::Buffer);

    auto end_trigger = em.on_event(ev("C", 15'000), 1.0, index, stats, 22'000);
    CHECK(end_trigger[0].kind == EngineAction::Kind::TriggerEnd);
}

TEST_CASE("full disorder caps the slack at one window") {
    PatternSpec p = pat("PATTERN SEQ(A a, C c) WITHIN 10 seconds");
    SourceConfig sources;
    sources.estimated_gap_s = {{"A", 1}, {"C", 1}};
    StreamStats stats(sources);
    stats.record_arrival(ev("A", 50'000), 0.0, 0.0);
    for (int i = 0; i < 9; ++i) stats.record_arrival(ev("A", 10, 51'000), 1.0, 0.5);
    CHECK(stats.ooo_ratio() == doctest::Approx(0.9));
    StreamStats all(sources);
    all.record_arrival(ev("A", 100), 0.0, 0.0);
    // every later arrival is late; the ratio tends to 1 and the slack to the window
    for (int i = 0; i < 999; ++i) all.record_arrival(ev("A", 10, 200 + i), 1.0, 0.5);
    CHECK(slack_duration_ms(p, all) == 9'990); // 999/1000 of the window
}
