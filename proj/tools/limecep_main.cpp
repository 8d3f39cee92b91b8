#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "limecep/dataset.hpp"
#include "limecep/emission.hpp"
#include "limecep/engine.hpp"
#include "limecep/errors.hpp"
#include "limecep/experiment.hpp"
#include "limecep/oracle.hpp"
#include "limecep/replay.hpp"
#include "limecep/score.hpp"

namespace {

using limecep::EventSet;
using ordered_json = nlohmann::ordered_json;

limecep::Weights parse_weights(const std::string& text) {
    limecep::Weights w;
    std::stringstream ss(text);
    std::string part;
    double values[3];
    for (double& v : values) {
        if (!std::getline(ss, part, ',')) throw limecep::ConfigError("--weights expects a,b,c");
        v = std::stod(part);
    }
    w.alpha = values[0];
    w.beta = values[1];
    w.gamma = values[2];
    return w;
}

double parse_theta(const std::string& text) {
    if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
    return std::stod(text);
}

limecep::SourceConfig load_sources(const std::string& path) {
    limecep::SourceConfig sources;
    if (path.empty()) return sources;
    std::ifstream is(path);
    if (!is) throw limecep::ConfigError("cannot open sources file: " + path);
    std::stringstream buffer;
    buffer << is.rdbuf();
    ordered_json o = ordered_json::parse(buffer.str());
    if (o.is_array()) {
        for (const auto& entry : o)
            sources.estimated_gap_s[entry.at("name").get<std::string>()] =
                entry.at("estimated_inter_arrival_seconds").get<double>();
    } else {
        for (const auto& [type, gap] : o.items()) sources.estimated_gap_s[type] = gap.get<double>();
    }
    return sources;
}

void write_truth_file(const std::string& path,
                      const std::map<std::string, std::set<EventSet>>& truth) {
    std::ofstream os(path);
    if (!os) throw limecep::ConfigError("cannot write truth file: " + path);
    for (const auto& [pattern_id, sets] : truth) {
        for (const auto& keys : sets) {
            ordered_json o;
            o["pattern_id"] = pattern_id;
            ordered_json events = ordered_json::array();
            for (const auto& k : keys) {
                ordered_json e;
                e["type"] = k.type;
                e["t_gen"] = k.gen_ms;
                e["id"] = k.id;
                events.push_back(std::move(e));
            }
            o["events"] = std::move(events);
            os << o.dump() << "\n";
        }
    }
}

std::map<std::string, std::set<EventSet>> read_truth_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw limecep::ConfigError("cannot open truth file: " + path);
    std::map<std::string, std::set<EventSet>> truth;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        ordered_json o = ordered_json::parse(line);
        EventSet keys;
        for (const auto& e : o.at("events"))
            keys.push_back(limecep::EventKey{e.at("t_gen").get<limecep::Timestamp>(),
                                             e.at("type").get<std::string>(),
                                             e.at("id").get<std::string>()});
        truth[o.at("pattern_id").get<std::string>()].insert(std::move(keys));
    }
    return truth;
}

std::map<std::string, std::set<EventSet>> truth_for(const std::vector<limecep::PatternSpec>& patterns,
                                                    const std::vector<limecep::LoadedEvent>& loaded) {
    std::vector<limecep::Event> events;
    events.reserve(loaded.size());
    for (const auto& le : loaded) events.push_back(le.event);
    std::map<std::string, std::set<EventSet>> truth;
    for (const auto& p : patterns) {
        auto& sets = truth[p.id];
        for (const auto& m : limecep::ground_truth(events, p)) sets.insert(m.keys());
    }
    return truth;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"limecep - pattern matching over disordered event streams"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "replay an event file through the engine");
    std::string run_patterns, run_events, run_policy = "stnm", run_correction = "on";
    std::string run_theta = "2.5", run_weights = "1,1,1", run_sources_path;
    double run_slack = 0.10;
    std::string run_report, run_emissions;
    run->add_option("--patterns", run_patterns, "pattern file or directory")->required();
    run->add_option("--events", run_events, "JSON-lines event file")->required();
    run->add_option("--policy", run_policy, "stnm|stam");
    run->add_option("--correction", run_correction, "on|off");
    run->add_option("--theta-mult", run_theta, "lateness threshold multiplier (or 'inf')");
    run->add_option("--weights", run_weights, "disorder score weights a,b,c");
    run->add_option("--slack-threshold", run_slack, "disorder ratio enabling slack");
    run->add_option("--sources", run_sources_path, "per-type estimated inter-arrival gaps (JSON)");
    run->add_option("--report", run_report, "score report output (JSON)");
    run->add_option("--emissions", run_emissions, "emission log output (JSON lines)");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a dataset");
    std::string gen_spec, gen_out;
    gen->add_option("--spec", gen_spec, "dataset spec (JSON file)")->required();
    gen->add_option("--out", gen_out, "output event file")->required();

    // score
    auto* score = app.add_subcommand("score", "score an emission log against a truth file");
    std::string score_emissions, score_truth, score_report;
    score->add_option("--emissions", score_emissions, "emission log (JSON lines)")->required();
    score->add_option("--truth", score_truth, "truth file (JSON lines)")->required();
    score->add_option("--report", score_report, "score report output (JSON)");

    // truth
    auto* truth = app.add_subcommand("truth", "compute the reference match set for an event file");
    std::string truth_patterns, truth_events, truth_policy = "stnm", truth_out;
    truth->add_option("--patterns", truth_patterns, "pattern file or directory")->required();
    truth->add_option("--events", truth_events, "JSON-lines event file")->required();
    truth->add_option("--policy", truth_policy, "stnm|stam");
    truth->add_option("--out", truth_out, "truth file output")->required();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run an experiment config");
    std::string experiment_config;
    experiment->add_option("--config", experiment_config, "experiment config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            limecep::RunConfig config;
            config.patterns =
                limecep::load_patterns(run_patterns, limecep::policy_from_string(run_policy));
            config.manager.weights = parse_weights(run_weights);
            config.manager.theta_multiplier = parse_theta(run_theta);
            config.manager.slack_ratio_threshold = run_slack;
            if (run_correction != "on" && run_correction != "off")
                throw limecep::ConfigError("--correction expects on|off");
            config.manager.correction = run_correction == "on";
            config.sources = load_sources(run_sources_path);
            config.events = limecep::load_event_file(run_events);

            limecep::RunResult result = limecep::run_once(config);
            if (!run_emissions.empty())
                limecep::write_emission_log_file(run_emissions, result.emissions);
            ordered_json o;
            o["summary"] = ordered_json::parse(result.summary.to_json());
            if (result.reference_available)
                o["score"] = ordered_json::parse(result.score.to_json());
            else
                o["score"] = "skipped: input is beyond the reference oracle's size guard";
            o["stats"] = ordered_json::parse(result.stats_json);
            if (!run_report.empty()) {
                std::ofstream os(run_report);
                os << o.dump(2) << "\n";
            }
            std::cout << o.dump(2) << "\n";
        } else if (*gen) {
            limecep::generate_dataset(limecep::dataset_spec_from_json_file(gen_spec), gen_out);
            std::cout << R"({"written":")" << gen_out << "\"}\n";
        } else if (*score) {
            auto log = limecep::read_emission_log_file(score_emissions);
            auto emitted = limecep::final_emitted(log);
            auto expected = read_truth_file(score_truth);
            for (const auto& [id, sets] : expected) emitted.try_emplace(id);
            limecep::MultiScoreReport report = limecep::evaluate_all(emitted, expected);
            if (!score_report.empty()) {
                std::ofstream os(score_report);
                os << report.to_json() << "\n";
            }
            std::cout << report.to_json() << "\n";
        } else if (*truth) {
            auto patterns =
                limecep::load_patterns(truth_patterns, limecep::policy_from_string(truth_policy));
            auto loaded = limecep::load_event_file(truth_events);
            write_truth_file(truth_out, truth_for(patterns, loaded));
            std::cout << R"({"written":")" << truth_out << "\"}\n";
        } else if (*experiment) {
            limecep::ExperimentReport report = limecep::run_experiment(experiment_config);
            std::cout << report.to_json() << "\n";
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
