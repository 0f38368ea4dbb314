#include "treejudge/aggregator.hpp"

#include <cmath>
#include <stdexcept>

#include "treejudge/errors.hpp"

namespace treejudge {

double weight_root(int depth) {
    if (depth < 1) throw std::invalid_argument("weight_root: depth must be >= 1, got " + std::to_string(depth));
    return 1.0 / depth;
}

double weight_topic(OriginSlot origin, double cumulative_a, double cumulative_b) noexcept {
    if (origin == OriginSlot::A && cumulative_a < cumulative_b) return 1.0;
    if (origin == OriginSlot::B && cumulative_b < cumulative_a) return 1.0;
    return 0.5;
}

double weight_sibling(std::span<const NodeScore> group) noexcept {
    if (group.empty()) return 1.0;
    double mean = 0.0;
    for (const auto& s : group) mean += s.a();
    mean /= static_cast<double>(group.size());
    double var = 0.0;
    for (const auto& s : group) var += (s.a() - mean) * (s.a() - mean);
    var /= static_cast<double>(group.size());
    return 1.0 / (var + 1.0);
}

double combine_weight(double w_root, double w_topic, double w_sibling, double alpha, double beta, double gamma) noexcept {
    return std::pow(w_root, alpha) * std::pow(w_topic, beta) * std::pow(w_sibling, gamma);
}

std::vector<NodeWeight> node_weights(const EvalTree& tree, const WeightParams& params) {
    const auto& nodes = tree.nodes;
    std::vector<NodeWeight> out;
    out.reserve(nodes.size());
    double cum_a = 0.0;
    double cum_b = 0.0;
    for (const auto& node : nodes) {
        std::vector<NodeScore> group;
        if (node.parent) {
            for (NodeId sib : nodes.at(*node.parent).children) {
                if (sib != node.id || params.sibling_group_includes_self) group.push_back(nodes.at(sib).score);
            }
        } else if (params.sibling_group_includes_self) {
            group.push_back(node.score);
        }
        NodeWeight w;
        w.root = weight_root(node.depth);
        w.topic = weight_topic(node.topic.origin_slot, cum_a, cum_b);
        w.sibling = weight_sibling(group);
        w.combined = combine_weight(w.root, w.topic, w.sibling, params.alpha, params.beta, params.gamma);
        out.push_back(w);
        cum_a += node.score.a();
        cum_b += node.score.b();
    }
    return out;
}

void annotate_weights(EvalTree& tree, const WeightParams& params) {
    const auto weights = node_weights(tree, params);
    for (std::size_t i = 0; i < weights.size(); ++i) tree.nodes[i].weight = weights[i];
}

namespace {

struct Sums {
    double weight = 0.0;
    double weighted_a = 0.0;

    ScorePair normalized() const {
        const double a = kScoreScale * weighted_a / (2.0 * weight);
        return {a, kScoreScale - a};
    }
};

}  // namespace

Aggregate aggregate(std::span<const EvalTree> trees, const WeightParams& params) {
    Sums total;
    std::map<std::string, Sums> per_topic;
    for (const auto& tree : trees) {
        if (tree.failed || tree.nodes.empty()) continue;
        const auto weights = node_weights(tree, params);
        auto& topic = per_topic[tree.root_topic];
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const double w = weights[i].combined;
            const double s = tree.nodes[i].score.a();
            total.weight += w;
            total.weighted_a += w * s;
            topic.weight += w;
            topic.weighted_a += w * s;
        }
    }
    if (per_topic.empty()) throw AggregationError("NoCompletedTrees: nothing to aggregate");
    if (!(total.weight > 0.0)) throw AggregationError("total node weight is zero");

    Aggregate out;
    out.score = total.normalized();
    out.total_weight = total.weight;
    for (const auto& [label, sums] : per_topic) out.per_topic[label] = sums.normalized();
    return out;
}

}  // namespace treejudge
