/// @file controller.hpp
/// @brief Tree planning: topic extraction and selection, question ranking,
/// tie-driven expansion, termination, and whole sessions.

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treejudge/chat.hpp"
#include "treejudge/config.hpp"
#include "treejudge/embedding.hpp"
#include "treejudge/errors.hpp"
#include "treejudge/templates.hpp"
#include "treejudge/types.hpp"

namespace treejudge {

/// Non-owning view of every provider a session talks to.
struct Backends {
    ChatBackend& model_a;
    ChatBackend& model_b;
    ChatBackend& examiner;
    ChatBackend& judge;
    ChatBackend& ner;
    Embedder& embedder;
};

struct CandidateTopic {
    std::string label;
    OriginSlot origin_slot = OriginSlot::A;
    double relevance = 0.0;

    bool operator==(const CandidateTopic&) const = default;
};

inline constexpr std::size_t kMaxExtractedTopics = 3;

/// Trimmed, non-empty strings of the first JSON list in `raw`, at most three.
/// Throws ParseError(NoListFound).
std::vector<std::string> parse_topic_list(std::string_view raw);

/// Asks the extraction role for subtopics of one answer. Output that never
/// parses within 1 + retry_limit attempts yields an empty list.
std::vector<std::string> extract_topics(ChatBackend& backend, const TemplateSet& templates, const std::string& node_topic,
                                        const std::string& question, const std::string& answer, int retry_limit,
                                        std::uint64_t seed);

/// Case-insensitive union in first-seen order; a label found in both lists is
/// marked Both and keeps the spelling seen first.
std::vector<CandidateTopic> merge_candidates(const std::vector<std::string>& from_a,
                                             const std::vector<std::string>& from_b);

/// Iterative pick-then-penalize selection of up to `k` candidates: relevance
/// starts as similarity to `anchor`; after each pick (highest relevance,
/// lowest index on ties) every remaining candidate's relevance drops by its
/// similarity to the pick. `relevance` in the output is the value at pick time.
std::vector<CandidateTopic> mmr_select_topics(std::vector<CandidateTopic> candidates, const std::string& anchor, int k,
                                              Embedder& embedder);

/// Candidate maximizing sim(q, topic) - max over memory of sim(q, Q_k), with
/// the max over an empty memory taken as 0. Ties go to the lowest index.
Question rank_questions(std::span<const std::string> candidates, const std::string& topic_label,
                        const SessionMemory& memory, Embedder& embedder);

/// The model every decisive sibling favours, provided there is at least one
/// decisive sibling and they all agree.
std::optional<Slot> check_sibling_dominance(std::span<const NodeScore> siblings) noexcept;

/// First applicable of NonTie, SiblingDominance, MaxDepth, NoTopics; Open
/// when none applies. `siblings` includes the node itself.
NodeStatus node_terminal_reason(const TreeNode& node, std::span<const NodeScore> siblings, const EvalConfig& config);

/// Per-tree construction context. Owns nothing; the memory is shared by all
/// trees of one repeat.
class TreeBuilder {
public:
    TreeBuilder(const EvalConfig& config, const TemplateSet& templates, Backends backends, SessionMemory& memory,
                std::uint64_t tree_seed);

    /// Root node for `root_topic`, then frontier expansion until no Open node
    /// remains. Failures of the root or of a fatal backend mark the tree
    /// failed and keep whatever was built.
    EvalTree build(const std::string& root_topic, int repeat);

    /// Adds children for every follow-up topic of an Open parent and assigns
    /// the group's terminal reasons. Returns the ids of the new children.
    std::vector<NodeId> expand_node(EvalTree& tree, NodeId parent);

private:
    NodeId create_node(EvalTree& tree, std::optional<NodeId> parent, Topic topic, int depth, std::uint64_t seed);
    std::optional<NodeId> try_create_child(EvalTree& tree, NodeId parent, std::size_t topic_index);
    void assign_group_status(EvalTree& tree, std::span<const NodeId> group) const;
    std::vector<Topic> follow_up_topics(const TreeNode& node, std::vector<std::string>& merged, std::uint64_t seed);
    void run_bfs(EvalTree& tree);
    void run_dfs(EvalTree& tree);

    const EvalConfig& config_;
    const TemplateSet& templates_;
    Backends backends_;
    SessionMemory& memory_;
    std::uint64_t tree_seed_;
    std::vector<std::uint64_t> node_seeds_;
};

/// Builds one tree; convenience wrapper over TreeBuilder.
EvalTree build_tree(const std::string& root_topic, Backends backends, const EvalConfig& config,
                    const TemplateSet& templates, SessionMemory& memory, std::uint64_t tree_seed, int repeat = 0);

/// Raised when every tree of some repeat failed.
class SessionFailed : public Error {
public:
    using Error::Error;
};

/// Full comparison: for each repeat a fresh memory and one tree per
/// predefined topic, aggregated per repeat and averaged across repeats.
SessionResult run_session(const std::string& model_a_id, const std::string& model_b_id, Backends backends,
                          const EvalConfig& config, const TemplateSet& templates);

/// Sub-seed of tree `topic_index` in repeat `repeat`.
std::uint64_t tree_seed(std::uint64_t session_seed, int repeat, std::size_t topic_index) noexcept;

}  // namespace treejudge
