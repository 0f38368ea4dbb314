#include "treejudge/controller.hpp"

#include <chrono>
#include <deque>
#include <limits>
#include <set>

#include <spdlog/spdlog.h>

#include "treejudge/aggregator.hpp"
#include "treejudge/examiner.hpp"
#include "treejudge/json_extract.hpp"
#include "treejudge/judge.hpp"
#include "treejudge/seed.hpp"

namespace treejudge {

std::vector<std::string> parse_topic_list(std::string_view raw) {
    const auto list = first_json_array(raw);
    if (!list) throw ParseError(ParseError::Kind::NoListFound, "no JSON list in extraction output");
    std::vector<std::string> out;
    for (const auto& item : *list) {
        if (!item.is_string()) continue;
        auto label = trim(item.get<std::string>());
        if (label.empty()) continue;
        out.push_back(std::move(label));
        if (out.size() == kMaxExtractedTopics) break;
    }
    return out;
}

std::vector<std::string> extract_topics(ChatBackend& backend, const TemplateSet& templates, const std::string& node_topic,
                                        const std::string& question, const std::string& answer, int retry_limit,
                                        std::uint64_t seed) {
    const Messages prompt{
        Message{Role::User, render(templates.ner, {{"topic", node_topic}, {"question", question}, {"answer", answer}})}};
    for (int attempt = 0; attempt <= retry_limit; ++attempt) {
        try {
            return parse_topic_list(
                backend.complete(prompt, CompletionOptions{0.0, derive_seed(seed, {static_cast<std::uint64_t>(attempt)})}));
        } catch (const ParseError& e) {
            spdlog::debug("topic extraction attempt {}: {}", attempt + 1, e.what());
        }
    }
    spdlog::warn("topic extraction for '{}' gave no list after {} attempts", node_topic, retry_limit + 1);
    return {};
}

std::vector<CandidateTopic> merge_candidates(const std::vector<std::string>& from_a,
                                             const std::vector<std::string>& from_b) {
    std::vector<CandidateTopic> out;
    std::vector<std::string> keys;
    auto add = [&](const std::string& raw, OriginSlot slot) {
        const std::string label = trim(raw);
        if (label.empty()) return;
        const std::string key = to_lower(label);
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (keys[i] == key) {
                if (out[i].origin_slot != slot) out[i].origin_slot = OriginSlot::Both;
                return;
            }
        }
        keys.push_back(key);
        out.push_back(CandidateTopic{label, slot, 0.0});
    };
    for (const auto& l : from_a) add(l, OriginSlot::A);
    for (const auto& l : from_b) add(l, OriginSlot::B);
    return out;
}

std::vector<CandidateTopic> mmr_select_topics(std::vector<CandidateTopic> candidates, const std::string& anchor, int k,
                                              Embedder& embedder) {
    // Drop case-insensitive duplicates up front, keeping the first spelling.
    std::vector<CandidateTopic> pool;
    std::set<std::string> seen;
    for (auto& c : candidates) {
        if (seen.insert(to_lower(c.label)).second) pool.push_back(std::move(c));
    }

    const Vector anchor_vec = embedder.embed(anchor);
    std::vector<Vector> vecs;
    vecs.reserve(pool.size());
    for (auto& c : pool) {
        vecs.push_back(embedder.embed(c.label));
        c.relevance = cosine_similarity(vecs.back(), anchor_vec);
    }

    std::vector<bool> taken(pool.size(), false);
    std::vector<CandidateTopic> out;
    while (out.size() < static_cast<std::size_t>(std::max(k, 0)) && out.size() < pool.size()) {
        std::size_t best = pool.size();
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (!taken[i] && (best == pool.size() || pool[i].relevance > pool[best].relevance)) best = i;
        }
        taken[best] = true;
        out.push_back(pool[best]);
        for (std::size_t j = 0; j < pool.size(); ++j) {
            if (!taken[j]) pool[j].relevance -= cosine_similarity(vecs[j], vecs[best]);
        }
    }
    return out;
}

Question rank_questions(std::span<const std::string> candidates, const std::string& topic_label,
                        const SessionMemory& memory, Embedder& embedder) {
    if (candidates.empty()) throw std::invalid_argument("rank_questions: no candidates");
    const Vector topic_vec = embedder.embed(topic_label);
    std::vector<Vector> history;
    for (const auto& entry : memory.entries()) history.push_back(embedder.embed(entry.question));

    Question best{candidates.front(), -std::numeric_limits<double>::infinity()};
    for (const auto& text : candidates) {
        const Vector q = embedder.embed(text);
        double redundancy = 0.0;
        if (!history.empty()) {
            redundancy = -std::numeric_limits<double>::infinity();
            for (const auto& h : history) redundancy = std::max(redundancy, cosine_similarity(q, h));
        }
        const double score = cosine_similarity(q, topic_vec) - redundancy;
        if (score > best.selection_score) best = Question{text, score};
    }
    return best;
}

std::optional<Slot> check_sibling_dominance(std::span<const NodeScore> siblings) noexcept {
    std::optional<Slot> winner;
    for (const auto& s : siblings) {
        const auto w = s.winner();
        if (!w) continue;
        if (winner && *winner != *w) return std::nullopt;
        winner = w;
    }
    return winner;
}

NodeStatus node_terminal_reason(const TreeNode& node, std::span<const NodeScore> siblings, const EvalConfig& config) {
    if (!node.score.is_tie()) return NodeStatus::NonTie;
    if (check_sibling_dominance(siblings)) return NodeStatus::SiblingDominance;
    if (node.depth >= config.max_depth) return NodeStatus::MaxDepth;
    if (node.follow_up_topics.empty()) return NodeStatus::NoTopics;
    return NodeStatus::Open;
}

namespace {

// Errors that make every further call pointless: the tree is abandoned.
bool is_fatal(const BackendError& e) {
    switch (e.kind()) {
        case BackendError::Kind::AuthMissing:
        case BackendError::Kind::ReplayMismatch:
        case BackendError::Kind::Unavailable:
            return true;
        default:
            return false;
    }
}

struct FatalBackend : Error {
    using Error::Error;
};

std::string ask_model(ChatBackend& model, const std::string& question, double temperature, std::uint64_t seed,
                      bool& failed, double& latency_ms) {
    const auto start = std::chrono::steady_clock::now();
    try {
        const Messages prompt{Message{Role::User, question}};
        auto answer = model.complete(prompt, CompletionOptions{temperature, seed});
        latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return answer;
    } catch (const BackendError& e) {
        if (is_fatal(e)) throw FatalBackend(e.what());
        spdlog::warn("model {} failed to answer: {}", model.name(), e.what());
        failed = true;
        latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return {};
    }
}

}  // namespace

TreeBuilder::TreeBuilder(const EvalConfig& config, const TemplateSet& templates, Backends backends,
                         SessionMemory& memory, std::uint64_t tree_seed)
    : config_(config), templates_(templates), backends_(backends), memory_(memory), tree_seed_(tree_seed) {}

std::vector<Topic> TreeBuilder::follow_up_topics(const TreeNode& node, std::vector<std::string>& merged,
                                                 std::uint64_t seed) {
    std::vector<Topic> out;
    if (!config_.step_one_enabled) {
        for (int i = 0; i < config_.branching; ++i) out.push_back(Topic::inherited(node.topic.label, node.id));
        return out;
    }
    auto extract = [&](const std::string& answer, bool failed, std::uint64_t slot) -> std::vector<std::string> {
        if (failed) return {};
        try {
            return extract_topics(backends_.ner, templates_, node.topic.label, node.question.text, answer,
                                  config_.retry_limit, derive_seed(seed, "ner", {slot}));
        } catch (const BackendError& e) {
            if (is_fatal(e)) throw FatalBackend(e.what());
            spdlog::warn("topic extraction failed: {}", e.what());
            return {};
        }
    };
    const auto from_a = extract(node.answers.answer_a, node.answers.failed_a, 0);
    const auto from_b = extract(node.answers.answer_b, node.answers.failed_b, 1);
    const auto candidates = merge_candidates(from_a, from_b);
    for (const auto& c : candidates) merged.push_back(c.label);
    for (auto& c : mmr_select_topics(candidates, node.topic.label, config_.branching, backends_.embedder)) {
        out.push_back(Topic::from_answer(std::move(c.label), c.origin_slot, node.id));
    }
    return out;
}

NodeId TreeBuilder::create_node(EvalTree& tree, std::optional<NodeId> parent, Topic topic, int depth,
                                std::uint64_t seed) {
    TreeNode node;
    node.id = tree.nodes.size();
    node.parent = parent;
    node.depth = depth;
    node.topic = std::move(topic);

    try {
        const SamplingSettings sampling{config_.question_candidates, config_.temperature, config_.retry_limit,
                                        config_.history_conditioning, derive_seed(seed, "examiner")};
        const auto candidates = sample_candidates(backends_.examiner, templates_, node.topic, memory_, sampling);
        node.question = rank_questions(candidates, node.topic.label, memory_, backends_.embedder);

        node.answers.answer_a = ask_model(backends_.model_a, node.question.text, config_.temperature,
                                          derive_seed(seed, "answer", {0}), node.answers.failed_a,
                                          node.answers.latency_a_ms);
        node.answers.answer_b = ask_model(backends_.model_b, node.question.text, config_.temperature,
                                          derive_seed(seed, "answer", {1}), node.answers.failed_b,
                                          node.answers.latency_b_ms);

        const JudgeSettings judging{config_.judge_temperature, config_.retry_limit, derive_seed(seed, "judge")};
        node.verdicts = exchange_judge(backends_.judge, templates_, node.question.text, node.answers, judging);
    } catch (const BackendError& e) {
        if (is_fatal(e)) throw FatalBackend(e.what());
        throw;
    }
    node.score = score_node(node.verdicts);

    memory_.append(MemoryEntry{node.topic.label, node.question.text, node.answers.answer_a, node.answers.answer_b});

    // Only a tie below the depth limit can ever be expanded.
    if (node.score.is_tie() && depth < config_.max_depth) {
        node.follow_up_topics = follow_up_topics(node, node.candidate_topics, seed);
    }

    const NodeId id = node.id;
    tree.nodes.push_back(std::move(node));
    node_seeds_.push_back(seed);
    if (parent) tree.nodes[*parent].children.push_back(id);
    return id;
}

std::optional<NodeId> TreeBuilder::try_create_child(EvalTree& tree, NodeId parent, std::size_t topic_index) {
    const Topic topic = tree.nodes[parent].follow_up_topics.at(topic_index);
    const int depth = tree.nodes[parent].depth + 1;
    const std::uint64_t seed = derive_seed(node_seeds_.at(parent), "child", {topic_index});
    try {
        return create_node(tree, parent, topic, depth, seed);
    } catch (const FatalBackend&) {
        throw;
    } catch (const Error& e) {
        spdlog::warn("child '{}' of node {} skipped: {}", topic.label, parent, e.what());
        tree.nodes[parent].expansion_failures.push_back(topic.label + ": " + e.what());
        return std::nullopt;
    }
}

void TreeBuilder::assign_group_status(EvalTree& tree, std::span<const NodeId> group) const {
    std::vector<NodeScore> scores;
    for (NodeId id : group) scores.push_back(tree.nodes[id].score);
    for (NodeId id : group) tree.nodes[id].status = node_terminal_reason(tree.nodes[id], scores, config_);
}

std::vector<NodeId> TreeBuilder::expand_node(EvalTree& tree, NodeId parent) {
    std::vector<NodeId> children;
    const std::size_t n = tree.nodes[parent].follow_up_topics.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (auto id = try_create_child(tree, parent, i)) children.push_back(*id);
    }
    assign_group_status(tree, children);
    return children;
}

void TreeBuilder::run_bfs(EvalTree& tree) {
    std::deque<NodeId> frontier;
    if (tree.nodes[0].status == NodeStatus::Open) frontier.push_back(0);
    while (!frontier.empty()) {
        const NodeId next = frontier.front();
        frontier.pop_front();
        for (NodeId child : expand_node(tree, next)) {
            if (tree.nodes[child].status == NodeStatus::Open) frontier.push_back(child);
        }
    }
}

void TreeBuilder::run_dfs(EvalTree& tree) {
    // Frontier of (parent, next topic index). Each child is judged against the
    // siblings finalized so far and descended into before the next sibling
    // exists.
    std::vector<std::pair<NodeId, std::size_t>> stack;
    if (tree.nodes[0].status == NodeStatus::Open) stack.emplace_back(0, 0);
    while (!stack.empty()) {
        auto& [parent, index] = stack.back();
        if (index >= tree.nodes[parent].follow_up_topics.size()) {
            stack.pop_back();
            continue;
        }
        const NodeId p = parent;
        const std::size_t i = index++;
        const auto child = try_create_child(tree, p, i);
        if (!child) continue;
        std::vector<NodeScore> finalized;
        for (NodeId sib : tree.nodes[p].children) finalized.push_back(tree.nodes[sib].score);
        tree.nodes[*child].status = node_terminal_reason(tree.nodes[*child], finalized, config_);
        if (tree.nodes[*child].status == NodeStatus::Open) stack.emplace_back(*child, 0);
    }
}

EvalTree TreeBuilder::build(const std::string& root_topic, int repeat) {
    EvalTree tree;
    tree.root_topic = root_topic;
    tree.repeat = repeat;
    node_seeds_.clear();
    try {
        const NodeId root = create_node(tree, std::nullopt, Topic::predefined(root_topic), 1, derive_seed(tree_seed_, "root"));
        const NodeScore only[] = {tree.nodes[root].score};
        tree.nodes[root].status = node_terminal_reason(tree.nodes[root], only, config_);
        if (config_.traversal == Traversal::BFS) run_bfs(tree);
        else run_dfs(tree);
    } catch (const Error& e) {
        spdlog::error("tree '{}' (repeat {}) aborted: {}", root_topic, repeat, e.what());
        tree.failed = true;
        tree.failure = e.what();
    }
    return tree;
}

EvalTree build_tree(const std::string& root_topic, Backends backends, const EvalConfig& config,
                    const TemplateSet& templates, SessionMemory& memory, std::uint64_t seed, int repeat) {
    TreeBuilder builder(config, templates, backends, memory, seed);
    return builder.build(root_topic, repeat);
}

std::uint64_t tree_seed(std::uint64_t session_seed, int repeat, std::size_t topic_index) noexcept {
    return derive_seed(session_seed, "tree", {static_cast<std::uint64_t>(repeat), topic_index});
}

SessionResult run_session(const std::string& model_a_id, const std::string& model_b_id, Backends backends,
                          const EvalConfig& config, const TemplateSet& templates) {
    SessionResult result;
    result.model_a_id = model_a_id;
    result.model_b_id = model_b_id;
    result.seed = config.seed;
    const auto params = WeightParams::from(config);

    struct TopicSums {
        double a = 0.0;
        int count = 0;
    };
    std::map<std::string, TopicSums> topic_sums;

    for (int r = 0; r < config.repeats; ++r) {
        SessionMemory memory;
        const std::size_t first = result.trees.size();
        RepeatResult rep;
        for (std::size_t t = 0; t < config.predefined_topics.size(); ++t) {
            EvalTree tree = build_tree(config.predefined_topics[t], backends, config, templates, memory,
                                       tree_seed(config.seed, r, t), r);
            if (tree.failed) rep.failed_topics.push_back(tree.root_topic);
            else annotate_weights(tree, params);
            rep.n_questions += tree.nodes.size();
            result.trees.push_back(std::move(tree));
        }
        Aggregate agg;
        try {
            agg = aggregate(std::span<const EvalTree>(result.trees).subspan(first), params);
        } catch (const AggregationError&) {
            throw SessionFailed("every tree of repeat " + std::to_string(r) + " failed");
        }
        rep.score = agg.score;
        for (const auto& [label, s] : agg.per_topic) {
            topic_sums[label].a += s.a;
            topic_sums[label].count += 1;
        }
        result.per_repeat.push_back(std::move(rep));
    }

    const double n = static_cast<double>(result.per_repeat.size());
    double mean_a = 0.0;
    double mean_q = 0.0;
    for (const auto& rep : result.per_repeat) {
        mean_a += rep.score.a;
        mean_q += static_cast<double>(rep.n_questions);
    }
    mean_a /= n;
    double var = 0.0;
    for (const auto& rep : result.per_repeat) var += (rep.score.a - mean_a) * (rep.score.a - mean_a);
    result.score = {mean_a, kScoreScale - mean_a};
    result.variance_a = var / n;
    result.n_questions = mean_q / n;
    for (const auto& [label, sums] : topic_sums) {
        const double a = sums.a / sums.count;
        result.per_topic[label] = {a, kScoreScale - a};
    }
    return result;
}

}  // namespace treejudge
