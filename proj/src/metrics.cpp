#include "treejudge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "treejudge/aggregator.hpp"
#include "treejudge/errors.hpp"

namespace treejudge {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw MetricsError(MetricsError::Kind::LengthMismatch,
                           "lists differ in length: " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
    if (x.size() < 2) throw MetricsError(MetricsError::Kind::TooShort, "need at least two items");
}

bool has_ties(std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) != s.end();
}

int sign(double v) { return (v > 0) - (v < 0); }

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    if (!has_ties(x) && !has_ties(y)) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < rx.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
        return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
    }
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;  // a constant list carries no ordering
    return sxy / std::sqrt(sxx * syy);
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const int sx = sign(x[i] - x[j]);
            const int sy = sign(y[i] - y[j]);
            if (sx == 0 && sy == 0) continue;
            if (sx == 0) ++ties_x;
            else if (sy == 0) ++ties_y;
            else if (sx == sy) ++concordant;
            else ++discordant;
        }
    }
    const double denom = std::sqrt(static_cast<double>(concordant + discordant + ties_x) *
                                   static_cast<double>(concordant + discordant + ties_y));
    if (denom == 0.0) return 0.0;
    return static_cast<double>(concordant - discordant) / denom;
}

bool Ranking::contains(const std::string& model) const {
    return std::any_of(ranked.begin(), ranked.end(), [&](const RankedModel& m) { return m.model == model; });
}

Ranking tournament_rank(const std::vector<std::string>& candidates, const std::string& reference,
                        const SessionRunner& run) {
    if (candidates.empty()) throw MetricsError(MetricsError::Kind::EmptyInput, "tournament needs at least one candidate");
    Ranking out;
    for (const auto& c : candidates) {
        try {
            out.ranked.push_back(RankedModel{c, run(c, reference), false});
        } catch (const std::exception& e) {
            spdlog::error("session {} vs {} failed: {}", c, reference, e.what());
            out.unranked.emplace_back(c, e.what());
        }
    }
    out.ranked.push_back(RankedModel{reference, kScoreScale / 2.0, true});
    std::stable_sort(out.ranked.begin(), out.ranked.end(),
                     [](const RankedModel& a, const RankedModel& b) { return a.score > b.score; });
    return out;
}

RefineResult bubble_refine(const std::vector<std::string>& initial_order, const SessionRunner& run, int max_passes) {
    if (initial_order.size() < 2) throw MetricsError(MetricsError::Kind::TooShort, "refinement needs at least two models");
    RefineResult out;
    out.order = initial_order;

    // Keyed by (model_a, model_b) as played; the reverse pairing is 5 - score.
    std::map<std::pair<std::string, std::string>, std::optional<double>> played;
    auto score_of = [&](const std::string& a, const std::string& b, Comparison& cmp) -> std::optional<double> {
        if (auto it = played.find({a, b}); it != played.end()) {
            cmp.cached = true;
            return it->second;
        }
        if (auto it = played.find({b, a}); it != played.end()) {
            cmp.cached = true;
            return it->second ? std::optional<double>(kScoreScale - *it->second) : std::nullopt;
        }
        std::optional<double> s;
        ++out.sessions_run;
        try {
            s = run(a, b);
        } catch (const std::exception& e) {
            spdlog::error("refine session {} vs {} failed: {}", a, b, e.what());
        }
        played[{a, b}] = s;
        return s;
    };

    while (out.passes < max_passes) {
        ++out.passes;
        bool swapped_any = false;
        for (std::size_t i = 0; i + 1 < out.order.size(); ++i) {
            Comparison cmp;
            cmp.leading = out.order[i];
            cmp.trailing = out.order[i + 1];
            const auto s = score_of(cmp.trailing, cmp.leading, cmp);
            cmp.failed = !s;
            cmp.trailing_score = s.value_or(kScoreScale / 2.0);
            cmp.swapped = s && *s > kScoreScale / 2.0;
            if (cmp.swapped) {
                std::swap(out.order[i], out.order[i + 1]);
                ++out.swaps;
                swapped_any = true;
            }
            out.log.push_back(cmp);
        }
        if (!swapped_any) break;
    }
    return out;
}

}  // namespace treejudge
