#include "treejudge/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "treejudge/aggregator.hpp"
#include "treejudge/backend_factory.hpp"
#include "treejudge/errors.hpp"
#include "treejudge/exports.hpp"
#include "treejudge/metrics.hpp"
#include "treejudge/session_io.hpp"
#include "treejudge/simulation.hpp"

namespace treejudge {

using json = nlohmann::json;

namespace {

struct Common {
    std::string config_path;
    std::string templates_dir;
    std::vector<std::string> topics;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string log_level = "warn";
};

void add_common(CLI::App& cmd, Common& c) {
    cmd.add_option("--config", c.config_path, "Configuration file (JSON)")->check(CLI::ExistingFile);
    cmd.add_option("--templates", c.templates_dir, "Directory holding examiner.txt, judge.txt and ner.txt")
        ->check(CLI::ExistingDirectory);
    cmd.add_option("--topics", c.topics, "Predefined root topics, comma separated")->delimiter(',');
    cmd.add_option_function<std::uint64_t>(
        "--seed",
        [&c](const std::uint64_t& v) {
            c.seed = v;
            c.seed_set = true;
        },
        "Session seed");
    cmd.add_option("--log-level", c.log_level, "trace, debug, info, warn, error or off");
}

EvalConfig resolve_config(const Common& c) {
    EvalConfig config = c.config_path.empty() ? EvalConfig{} : load_config(c.config_path);
    if (!c.topics.empty()) {
        std::vector<std::string> topics;
        for (const auto& t : c.topics)
            if (auto s = trim(t); !s.empty()) topics.push_back(s);
        if (topics.empty()) throw ConfigError(ConfigError::Kind::EmptyTopicList, "predefined_topics", "no topics given");
        config.predefined_topics = topics;
    }
    if (c.seed_set) config.seed = c.seed;
    if (!c.templates_dir.empty()) config.templates_dir = c.templates_dir;
    return config;
}

TemplateSet resolve_templates(const EvalConfig& config) {
    return config.templates_dir.empty() ? TemplateSet::builtin() : TemplateSet::load(config.templates_dir);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") out << text;
    else write_file_atomic(path, text);
}

std::string fixed2(double v) { return fmt::format("{:.2f}", v); }

json summary_json(const SessionFile& s) {
    json per_topic = json::object();
    for (const auto& [label, p] : s.result.per_topic) per_topic[label] = json{{"a", p.a}, {"b", p.b}};
    return json{{"model_a", s.result.model_a_id},
                {"model_b", s.result.model_b_id},
                {"seed", s.result.seed},
                {"score", json{{"a", s.result.score.a}, {"b", s.result.score.b}}},
                {"variance_a", s.result.variance_a},
                {"n_questions", s.result.n_questions},
                {"per_topic", per_topic},
                {"trees", s.result.trees.size()}};
}

/// Runs one pair session per call; all sessions share one factory so a
/// replay store sees the calls in order.
SessionRunner make_runner(BackendFactory& factory, const EvalConfig& config, const TemplateSet& templates) {
    return [&factory, &config, &templates](const std::string& a, const std::string& b) {
        auto backends = make_session_backends(factory, a, b, config);
        return run_session(a, b, backends.view(), config, templates).score.a;
    };
}

}  // namespace

std::vector<std::pair<std::string, double>> read_ranking_csv(const std::string& path) {
    std::istringstream in(read_text(path));
    std::vector<std::pair<std::string, double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto comma = line.rfind(',');
        if (comma == std::string::npos)
            throw ParseError(ParseError::Kind::UnrecognizedValue, fmt::format("{}:{}: expected label,value", path, lineno));
        std::string label = trim(line.substr(0, comma));
        if (label.size() >= 2 && label.front() == '"' && label.back() == '"') label = label.substr(1, label.size() - 2);
        const std::string value = trim(line.substr(comma + 1));
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (value.empty() || end != value.c_str() + value.size()) {
            if (rows.empty() && lineno == 1) continue;  // header
            throw ParseError(ParseError::Kind::UnrecognizedValue,
                             fmt::format("{}:{}: '{}' is not a number", path, lineno, value));
        }
        rows.emplace_back(label, v);
    }
    return rows;
}

Correlation correlate_rankings(const std::vector<std::pair<std::string, double>>& a,
                               const std::vector<std::pair<std::string, double>>& b) {
    std::map<std::string, double> lookup(b.begin(), b.end());
    std::vector<double> x, y;
    for (const auto& [label, v] : a) {
        if (auto it = lookup.find(label); it != lookup.end()) {
            x.push_back(v);
            y.push_back(it->second);
        }
    }
    return Correlation{spearman_rho(x, y), kendall_tau(x, y), x.size()};
}

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pairwise tree-structured evaluation of chat models", "treejudge"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    Common common;

    auto* eval = app.add_subcommand("eval", "Run one pair session and write the session file");
    std::string model_a, model_b, session_out = "session.json";
    eval->add_option("--model-a", model_a, "Endpoint spec of model A")->required();
    eval->add_option("--model-b", model_b, "Endpoint spec of model B")->required();
    eval->add_option("--out", session_out, "Session file path");
    add_common(*eval, common);

    auto* rank = app.add_subcommand("rank", "Score candidates against one reference model");
    std::string reference, rank_out;
    std::vector<std::string> candidates;
    rank->add_option("--reference", reference, "Endpoint spec of the reference model")->required();
    rank->add_option("--candidates", candidates, "Candidate endpoint specs")->required()->delimiter(',');
    rank->add_option("--out", rank_out, "Ranking CSV path (stdout when omitted)");
    add_common(*rank, common);

    auto* refine = app.add_subcommand("refine", "Bubble-sort an ordering by direct pair sessions");
    std::vector<std::string> order;
    int max_passes = 0;
    refine->add_option("--order", order, "Endpoint specs, best first")->required()->delimiter(',');
    refine->add_option("--max-passes", max_passes, "Pass limit (default: number of models)")
        ->check(CLI::NonNegativeNumber);
    add_common(*refine, common);

    auto* correlate = app.add_subcommand("correlate", "Rank correlation of two label,value CSV files");
    std::string ranking_a, ranking_b;
    correlate->add_option("--ranking-a", ranking_a, "First ranking CSV")->required()->check(CLI::ExistingFile);
    correlate->add_option("--ranking-b", ranking_b, "Second ranking CSV")->required()->check(CLI::ExistingFile);

    auto* report = app.add_subcommand("report", "Export a stored session");
    std::string session_path, format = "json", report_out;
    int tree_index = -1;
    report->add_option("--session", session_path, "Session file")->required()->check(CLI::ExistingFile);
    report->add_option("--format", format, "dot, csv or json")->check(CLI::IsMember({"dot", "csv", "json"}));
    report->add_option("--tree", tree_index, "Only this tree (dot format)");
    report->add_option("--out", report_out, "Output path (stdout when omitted)");

    auto* simulate = app.add_subcommand("simulate", "Synthetic skill-gap sweep of question counts");
    std::vector<double> gaps{0.25, 0.5, 1.0, 2.0, 4.0};
    int seeds = 20;
    simulate->add_option("--gap-sweep", gaps, "Skill gaps, comma separated")->delimiter(',');
    simulate->add_option("--seeds", seeds, "Seeds per gap")->check(CLI::PositiveNumber);
    add_common(*simulate, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    if (auto level = spdlog::level::from_str(common.log_level); level != spdlog::level::off || common.log_level == "off")
        spdlog::set_level(level);

    try {
        if (eval->parsed()) {
            const EvalConfig config = resolve_config(common);
            const TemplateSet templates = resolve_templates(config);
            BackendFactory factory(config);
            auto backends = make_session_backends(factory, model_a, model_b, config);
            const auto result = run_session(model_a, model_b, backends.view(), config, templates);
            save_session(result, config, session_out);
            out << fmt::format("{} {:.4f} {:.4f} (var {:.4f}, {:.1f} questions) -> {}\n", "score", result.score.a,
                               result.score.b, result.variance_a, result.n_questions, session_out);
        } else if (rank->parsed()) {
            const EvalConfig config = resolve_config(common);
            const TemplateSet templates = resolve_templates(config);
            BackendFactory factory(config);
            const auto ranking = tournament_rank(candidates, reference, make_runner(factory, config, templates));
            std::string csv = "model,score\n";
            for (const auto& m : ranking.ranked) csv += csv_field(m.model) + fmt::format(",{:.4f}\n", m.score);
            emit(csv, rank_out, out);
            for (const auto& [m, why] : ranking.unranked) err << "unranked: " << m << ": " << why << "\n";
        } else if (refine->parsed()) {
            const EvalConfig config = resolve_config(common);
            const TemplateSet templates = resolve_templates(config);
            BackendFactory factory(config);
            const int passes = max_passes > 0 ? max_passes : static_cast<int>(order.size());
            const auto result = bubble_refine(order, make_runner(factory, config, templates), passes);
            for (const auto& c : result.log)
                out << fmt::format("{} vs {}: {:.4f}{}{}{}\n", c.trailing, c.leading, c.trailing_score,
                                   c.swapped ? " swap" : "", c.cached ? " (cached)" : "", c.failed ? " (failed)" : "");
            out << fmt::format("passes {} swaps {} sessions {}\n", result.passes, result.swaps, result.sessions_run);
            for (std::size_t i = 0; i < result.order.size(); ++i) out << (i + 1) << ". " << result.order[i] << "\n";
        } else if (correlate->parsed()) {
            const auto c = correlate_rankings(read_ranking_csv(ranking_a), read_ranking_csv(ranking_b));
            out << "n " << c.n << "\n";
            out << "spearman_rho " << fixed2(c.rho) << "\n";
            out << "kendall_tau " << fixed2(c.tau) << "\n";
        } else if (report->parsed()) {
            const auto session = load_session(session_path);
            std::string text;
            if (format == "dot") {
                const auto& trees = session.result.trees;
                if (tree_index >= static_cast<int>(trees.size()))
                    throw IoFailure(fmt::format("session has {} trees", trees.size()));
                for (std::size_t i = 0; i < trees.size(); ++i)
                    if (tree_index < 0 || static_cast<int>(i) == tree_index) text += export_tree_dot(trees[i]);
            } else if (format == "csv") {
                text = export_radar_csv({{session.result.model_a_id, session.result}});
            } else {
                text = summary_json(session).dump(2) + "\n";
            }
            emit(text, report_out, out);
        } else if (simulate->parsed()) {
            const EvalConfig config = resolve_config(common);
            const auto sweep = simulate_gap_sweep(config, gaps, seeds, resolve_templates(config),
                                                  common.seed_set ? common.seed : 1);
            out << "gap,mean_n_questions,mean_score_a\n";
            for (const auto& p : sweep.points)
                out << fmt::format("{},{:.4f},{:.4f}\n", p.gap, p.mean_n_questions, p.mean_score_a);
            out << fmt::format("# spearman(gap, n_questions) = {:.4f}; monotone non-increasing: {}\n", sweep.spearman,
                               sweep.monotone_non_increasing ? "yes" : "no");
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace treejudge
