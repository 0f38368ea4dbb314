/// @file metrics.hpp
/// @brief Rank correlations and reference-anchored ranking of models.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treejudge/types.hpp"

namespace treejudge {

/// 1-based ranks with tied values sharing their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman's rho. Uses 1 - 6*sum(d^2)/(n(n^2-1)) when neither list has ties,
/// the Pearson correlation of average ranks otherwise. Throws MetricsError.
double spearman_rho(std::span<const double> x, std::span<const double> y);

/// Kendall's tau-b over all pairs. Throws MetricsError.
double kendall_tau(std::span<const double> x, std::span<const double> y);

/// Runs one session with `model_a` against `model_b` and returns model_a's
/// normalized score (0..5, parity 2.5).
using SessionRunner = std::function<double(const std::string& model_a, const std::string& model_b)>;

struct RankedModel {
    std::string model;
    double score = 2.5;
    bool is_reference = false;
};

struct Ranking {
    std::vector<RankedModel> ranked;  // best first
    std::vector<std::pair<std::string, std::string>> unranked;  // model, error

    bool contains(const std::string& model) const;
};

/// Scores each candidate against `reference` and orders by score, with the
/// reference placed at 2.5. Equal scores keep candidate order; the reference
/// goes after candidates it ties with. A failing session leaves its
/// candidate unranked.
Ranking tournament_rank(const std::vector<std::string>& candidates, const std::string& reference,
                        const SessionRunner& run);

struct Comparison {
    std::string trailing;  // played as model A
    std::string leading;   // played as model B
    double trailing_score = 2.5;
    bool swapped = false;
    bool cached = false;
    bool failed = false;
};

struct RefineResult {
    std::vector<std::string> order;
    std::vector<Comparison> log;
    int passes = 0;
    int swaps = 0;
    int sessions_run = 0;
};

/// Bubble-sort passes over `initial_order` (best first). An adjacent pair
/// swaps iff the trailing model scores strictly above 2.5 against the leading
/// one. Stops after a pass with no swaps or after `max_passes`. Each
/// unordered pair is played at most once; a failed session counts as no swap.
RefineResult bubble_refine(const std::vector<std::string>& initial_order, const SessionRunner& run, int max_passes);

}  // namespace treejudge
