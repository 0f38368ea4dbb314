/// @file simulation.hpp
/// @brief Skill-gap sweeps over synthetic agents.

#pragma once

#include <cstdint>
#include <vector>

#include "treejudge/config.hpp"
#include "treejudge/templates.hpp"

namespace treejudge {

struct GapPoint {
    double gap = 0.0;
    double mean_n_questions = 0.0;  // averaged over seeds
    double mean_score_a = 2.5;
    int sessions = 0;
};

struct GapSweep {
    std::vector<GapPoint> points;
    double spearman = 0.0;  // gap vs mean_n_questions
    bool monotone_non_increasing = false;
};

/// One synthetic session per (gap, seed) with model A at skill `gap` and
/// model B at 0, using `base` with every role synthetic and seeds
/// `first_seed .. first_seed + seeds - 1`.
GapSweep simulate_gap_sweep(const EvalConfig& base, const std::vector<double>& gaps, int seeds,
                            const TemplateSet& templates, std::uint64_t first_seed = 1);

}  // namespace treejudge
