/// @file aggregator.hpp
/// @brief Node importance weights and normalized session scores.
///
/// Each node t gets w_t = w_root^alpha * w_topic^beta * w_sibling^gamma, and a
/// model's score is 5 * sum(w_t * S_t) / (2 * sum(w_t)), so the two models'
/// scores always add up to 5 and parity sits at 2.5. Weights are derived from
/// a finished tree alone, which keeps aggregation replayable from session files.

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "treejudge/config.hpp"
#include "treejudge/types.hpp"

namespace treejudge {

inline constexpr double kScoreScale = 5.0;

/// 1/depth; root depth is 1. Throws std::invalid_argument for depth < 1.
double weight_root(int depth);

/// 1.0 when the topic came from the answer of the model that trails on
/// cumulative raw score, 0.5 otherwise (roots, shared topics, level scores).
double weight_topic(OriginSlot origin, double cumulative_a, double cumulative_b) noexcept;

/// 1 / (population variance of score_a over `group` + 1). Empty groups give 1.
double weight_sibling(std::span<const NodeScore> group) noexcept;

double combine_weight(double w_root, double w_topic, double w_sibling, double alpha, double beta, double gamma) noexcept;

struct WeightParams {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 0.4;
    bool sibling_group_includes_self = true;

    static WeightParams from(const EvalConfig& c) {
        return {c.alpha, c.beta, c.gamma, c.sibling_group_includes_self};
    }
};

/// Weights for every node of `tree`, indexed by node id. The cumulative score
/// seen by node t is the sum over nodes with smaller ids, i.e. the tree state
/// when t's question was posed.
std::vector<NodeWeight> node_weights(const EvalTree& tree, const WeightParams& params);

/// Writes node_weights() into each node's `weight` field.
void annotate_weights(EvalTree& tree, const WeightParams& params);

struct Aggregate {
    ScorePair score;
    std::map<std::string, ScorePair> per_topic;  // same formula per tree
    double total_weight = 0.0;
};

/// Aggregates all non-failed trees. Throws AggregationError when none remain.
Aggregate aggregate(std::span<const EvalTree> trees, const WeightParams& params);

}  // namespace treejudge
