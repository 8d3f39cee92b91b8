#include "limecep/score.hpp"

#include <json.hpp>

namespace limecep {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json report_json(const ScoreReport& r) {
    ordered_json o;
    o["tp"] = r.tp;
    o["fp"] = r.fp;
    o["fn"] = r.fn;
    o["precision"] = r.precision;
    o["recall"] = r.recall;
    o["mean_latency_ms"] = r.mean_latency_ms;
    o["max_latency_ms"] = r.max_latency_ms;
    return o;
}

}  // namespace

std::string ScoreReport::to_json() const { return report_json(*this).dump(); }

ScoreReport evaluate(const std::set<EventSet>& emitted, const std::set<EventSet>& truth) {
    ScoreReport r;
    for (const auto& m : emitted)
        truth.count(m) ? ++r.tp : ++r.fp;
    for (const auto& t : truth)
        if (emitted.count(t) == 0) ++r.fn;
    r.precision = r.tp + r.fp == 0 ? 1.0 : static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
    r.recall = r.tp + r.fn == 0 ? 1.0 : static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
    return r;
}

MultiScoreReport evaluate_all(const std::map<std::string, std::set<EventSet>>& emitted,
                              const std::map<std::string, std::set<EventSet>>& truth) {
    MultiScoreReport out;
    std::set<std::string> ids;
    for (const auto& [id, s] : emitted) ids.insert(id);
    for (const auto& [id, s] : truth) ids.insert(id);

    static const std::set<EventSet> kEmpty;
    for (const std::string& id : ids) {
        auto e = emitted.find(id);
        auto t = truth.find(id);
        ScoreReport r = evaluate(e == emitted.end() ? kEmpty : e->second,
                                 t == truth.end() ? kEmpty : t->second);
        out.total.tp += r.tp;
        out.total.fp += r.fp;
        out.total.fn += r.fn;
        out.per_pattern[id] = std::move(r);
    }
    out.total.precision = out.total.tp + out.total.fp == 0
                              ? 1.0
                              : static_cast<double>(out.total.tp) /
                                    static_cast<double>(out.total.tp + out.total.fp);
    out.total.recall = out.total.tp + out.total.fn == 0
                           ? 1.0
                           : static_cast<double>(out.total.tp) /
                                 static_cast<double>(out.total.tp + out.total.fn);
    return out;
}

std::string MultiScoreReport::to_json() const {
    ordered_json o;
    o["total"] = report_json(total);
    ordered_json per = ordered_json::object();
    for (const auto& [id, r] : per_pattern) per[id] = report_json(r);
    o["per_pattern"] = std::move(per);
    return o.dump();
}

}  // namespace limecep
