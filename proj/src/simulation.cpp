#include "treejudge/simulation.hpp"

#include "treejudge/backend_factory.hpp"
#include "treejudge/controller.hpp"
#include "treejudge/metrics.hpp"

#include <fmt/format.h>

namespace treejudge {

GapSweep simulate_gap_sweep(const EvalConfig& base, const std::vector<double>& gaps, int seeds,
                            const TemplateSet& templates, std::uint64_t first_seed) {
    EvalConfig config = base;
    config.backends.examiner = "synthetic";
    config.backends.judge = "synthetic";
    config.backends.ner = "synthetic";
    config.backends.embedder = "mock";
    config.backends.replay_mode = ReplayMode::Off;

    GapSweep out;
    for (double gap : gaps) {
        GapPoint point;
        point.gap = gap;
        point.mean_score_a = 0.0;
        BackendFactory factory(config);
        auto backends = make_session_backends(factory, fmt::format("synthetic:{}", gap), "synthetic:0", config);
        for (int s = 0; s < seeds; ++s) {
            config.seed = first_seed + static_cast<std::uint64_t>(s);
            const auto result = run_session(backends.model_a->name(), backends.model_b->name(), backends.view(),
                                            config, templates);
            point.mean_n_questions += result.n_questions;
            point.mean_score_a += result.score.a;
            ++point.sessions;
        }
        if (point.sessions > 0) {
            point.mean_score_a /= point.sessions;
            point.mean_n_questions /= point.sessions;
        }
        out.points.push_back(point);
    }

    out.monotone_non_increasing = true;
    for (std::size_t i = 1; i < out.points.size(); ++i)
        if (out.points[i].mean_n_questions > out.points[i - 1].mean_n_questions) out.monotone_non_increasing = false;
    if (out.points.size() >= 2) {
        std::vector<double> x, y;
        for (const auto& p : out.points) {
            x.push_back(p.gap);
            y.push_back(p.mean_n_questions);
        }
        out.spearman = spearman_rho(x, y);
    }
    return out;
}

}  // namespace treejudge
