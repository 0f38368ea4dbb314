/// @file types.hpp
/// @brief Domain types for pairwise tree evaluation sessions.
///
/// Everything here is a plain value type. Nodes and trees are mutated only by
/// the controller while a tree is under construction and are treated as
/// immutable afterwards.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace treejudge {

using NodeId = std::size_t;

/// One of the two models under comparison.
enum class Slot { A, B };

constexpr Slot other(Slot s) noexcept { return s == Slot::A ? Slot::B : Slot::A; }
const char* to_string(Slot s) noexcept;

/// Where a topic label came from.
enum class TopicOrigin {
    Predefined,   // tree root, drawn from the configured topic list
    FromAnswer,   // extracted from one or both answers of the parent node
    Inherited,    // parent label reused verbatim (topic extraction disabled)
};

/// Which answer(s) produced an extracted topic.
enum class OriginSlot { None, A, B, Both };

const char* to_string(TopicOrigin o) noexcept;
const char* to_string(OriginSlot o) noexcept;
std::optional<TopicOrigin> topic_origin_from_string(const std::string& s);
std::optional<OriginSlot> origin_slot_from_string(const std::string& s);

struct Topic {
    std::string label;
    TopicOrigin origin = TopicOrigin::Predefined;
    OriginSlot origin_slot = OriginSlot::None;
    std::optional<NodeId> parent_node;

    static Topic predefined(std::string label);
    static Topic from_answer(std::string label, OriginSlot slot, NodeId parent);
    static Topic inherited(std::string label, NodeId parent);

    bool operator==(const Topic&) const = default;
};

/// Trims ASCII whitespace from both ends.
std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

struct Question {
    std::string text;
    double selection_score = 0.0;

    bool operator==(const Question&) const = default;
};

struct AnswerPair {
    std::string answer_a;
    std::string answer_b;
    bool failed_a = false;
    bool failed_b = false;
    // Wall-clock telemetry, not persisted in session files.
    double latency_a_ms = 0.0;
    double latency_b_ms = 0.0;

    bool operator==(const AnswerPair& o) const {
        return answer_a == o.answer_a && answer_b == o.answer_b && failed_a == o.failed_a &&
               failed_b == o.failed_b;
    }
};

enum class Direction { Forward, Swapped };
enum class RawVerdict { Response1, Response2, Tie };
enum class Outcome { ModelA, ModelB, Tie };

const char* to_string(Direction d) noexcept;
const char* to_string(RawVerdict v) noexcept;
const char* to_string(Outcome o) noexcept;
std::optional<Direction> direction_from_string(const std::string& s);
std::optional<RawVerdict> raw_verdict_from_string(const std::string& s);
std::optional<Outcome> outcome_from_string(const std::string& s);

/// Maps a slot-relative verdict to the model it names. Forward puts model A in
/// slot 1; Swapped puts model B there.
Outcome resolve(RawVerdict raw, Direction direction) noexcept;

struct Verdict {
    Direction direction = Direction::Forward;
    RawVerdict raw = RawVerdict::Tie;
    Outcome resolved = Outcome::Tie;
    bool degraded = false;  // parse retries exhausted, defaulted to Tie

    static Verdict make(RawVerdict raw, Direction direction, bool degraded = false);

    bool operator==(const Verdict&) const = default;
};

using VerdictPair = std::pair<Verdict, Verdict>;

/// Node outcome. The two components always sum to 2.
class NodeScore {
public:
    NodeScore() = default;

    static NodeScore tie() noexcept { return NodeScore(1, 1); }
    static NodeScore win(Slot winner) noexcept {
        return winner == Slot::A ? NodeScore(2, 0) : NodeScore(0, 2);
    }
    /// Validating constructor for deserialized data.
    static std::optional<NodeScore> from_components(int a, int b) noexcept;

    int a() const noexcept { return a_; }
    int b() const noexcept { return b_; }
    int of(Slot s) const noexcept { return s == Slot::A ? a_ : b_; }
    bool is_tie() const noexcept { return a_ == 1; }
    std::optional<Slot> winner() const noexcept;
    NodeScore swapped() const noexcept { return NodeScore(b_, a_); }

    bool operator==(const NodeScore&) const = default;

private:
    NodeScore(int a, int b) noexcept : a_(a), b_(b) {}

    int a_ = 1;
    int b_ = 1;
};

enum class NodeStatus { Open, NonTie, SiblingDominance, MaxDepth, NoTopics };

const char* to_string(NodeStatus s) noexcept;
std::optional<NodeStatus> node_status_from_string(const std::string& s);

/// Weight components attached to a node by the aggregator.
struct NodeWeight {
    double root = 1.0;
    double topic = 0.5;
    double sibling = 1.0;
    double combined = 0.5;

    bool operator==(const NodeWeight&) const = default;
};

struct TreeNode {
    NodeId id = 0;
    std::optional<NodeId> parent;
    int depth = 1;
    Topic topic;
    Question question;
    AnswerPair answers;
    VerdictPair verdicts;
    NodeScore score;
    std::vector<std::string> candidate_topics;  // merged extraction output, before selection
    std::vector<Topic> follow_up_topics;
    std::vector<NodeId> children;
    NodeStatus status = NodeStatus::Open;
    std::vector<std::string> expansion_failures;
    std::optional<NodeWeight> weight;

    bool is_terminal() const noexcept { return status != NodeStatus::Open; }
    bool operator==(const TreeNode&) const = default;
};

/// One tree rooted at a predefined topic. Node ids index `nodes` and follow
/// creation order, which is also finalization order.
struct EvalTree {
    std::string root_topic;
    int repeat = 0;
    std::vector<TreeNode> nodes;
    bool failed = false;
    std::string failure;

    bool operator==(const EvalTree&) const = default;
};

struct MemoryEntry {
    std::string topic_label;
    std::string question;
    std::string answer_a;
    std::string answer_b;
};

/// Append-only session history, ordered by node finalization.
class SessionMemory {
public:
    void append(MemoryEntry entry) { entries_.push_back(std::move(entry)); }
    const std::vector<MemoryEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::vector<std::string> questions() const;

private:
    std::vector<MemoryEntry> entries_;
};

struct ScorePair {
    double a = 2.5;
    double b = 2.5;

    bool operator==(const ScorePair&) const = default;
};

struct RepeatResult {
    ScorePair score;
    std::size_t n_questions = 0;
    std::vector<std::string> failed_topics;

    bool operator==(const RepeatResult&) const = default;
};

struct SessionResult {
    std::string model_a_id;
    std::string model_b_id;
    std::uint64_t seed = 0;
    std::vector<EvalTree> trees;  // all repeats, in build order
    double n_questions = 0.0;     // mean node count per repeat
    ScorePair score;              // mean over repeats
    std::map<std::string, ScorePair> per_topic;
    std::vector<RepeatResult> per_repeat;
    double variance_a = 0.0;

    bool operator==(const SessionResult&) const = default;
};

}  // namespace treejudge
