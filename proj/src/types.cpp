#include "treejudge/types.hpp"

#include <algorithm>
#include <cctype>

namespace treejudge {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::string& s, const std::pair<E, const char*> (&table)[N]) {
    for (const auto& [value, name] : table) {
        if (s == name) return value;
    }
    return std::nullopt;
}

constexpr std::pair<TopicOrigin, const char*> kOrigins[] = {
    {TopicOrigin::Predefined, "predefined"},
    {TopicOrigin::FromAnswer, "from_answer"},
    {TopicOrigin::Inherited, "inherited"},
};
constexpr std::pair<OriginSlot, const char*> kOriginSlots[] = {
    {OriginSlot::None, "none"}, {OriginSlot::A, "A"}, {OriginSlot::B, "B"}, {OriginSlot::Both, "both"}};
constexpr std::pair<Direction, const char*> kDirections[] = {
    {Direction::Forward, "forward"}, {Direction::Swapped, "swapped"}};
constexpr std::pair<RawVerdict, const char*> kRaw[] = {
    {RawVerdict::Response1, "Response 1"}, {RawVerdict::Response2, "Response 2"}, {RawVerdict::Tie, "Tie"}};
constexpr std::pair<Outcome, const char*> kOutcomes[] = {
    {Outcome::ModelA, "A"}, {Outcome::ModelB, "B"}, {Outcome::Tie, "tie"}};
constexpr std::pair<NodeStatus, const char*> kStatuses[] = {
    {NodeStatus::Open, "open"},
    {NodeStatus::NonTie, "non_tie"},
    {NodeStatus::SiblingDominance, "sibling_dominance"},
    {NodeStatus::MaxDepth, "max_depth"},
    {NodeStatus::NoTopics, "no_topics"},
};

template <typename E, std::size_t N>
const char* name_of(E value, const std::pair<E, const char*> (&table)[N]) noexcept {
    for (const auto& [v, name] : table) {
        if (v == value) return name;
    }
    return "?";
}

}  // namespace

const char* to_string(Slot s) noexcept { return s == Slot::A ? "A" : "B"; }
const char* to_string(TopicOrigin o) noexcept { return name_of(o, kOrigins); }
const char* to_string(OriginSlot o) noexcept { return name_of(o, kOriginSlots); }
const char* to_string(Direction d) noexcept { return name_of(d, kDirections); }
const char* to_string(RawVerdict v) noexcept { return name_of(v, kRaw); }
const char* to_string(Outcome o) noexcept { return name_of(o, kOutcomes); }
const char* to_string(NodeStatus s) noexcept { return name_of(s, kStatuses); }

std::optional<TopicOrigin> topic_origin_from_string(const std::string& s) { return lookup(s, kOrigins); }
std::optional<OriginSlot> origin_slot_from_string(const std::string& s) { return lookup(s, kOriginSlots); }
std::optional<Direction> direction_from_string(const std::string& s) { return lookup(s, kDirections); }
std::optional<RawVerdict> raw_verdict_from_string(const std::string& s) { return lookup(s, kRaw); }
std::optional<Outcome> outcome_from_string(const std::string& s) { return lookup(s, kOutcomes); }
std::optional<NodeStatus> node_status_from_string(const std::string& s) { return lookup(s, kStatuses); }

Topic Topic::predefined(std::string label) {
    return Topic{std::move(label), TopicOrigin::Predefined, OriginSlot::None, std::nullopt};
}

Topic Topic::from_answer(std::string label, OriginSlot slot, NodeId parent) {
    return Topic{std::move(label), TopicOrigin::FromAnswer, slot, parent};
}

Topic Topic::inherited(std::string label, NodeId parent) {
    return Topic{std::move(label), TopicOrigin::Inherited, OriginSlot::None, parent};
}

std::string trim(std::string_view s) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return std::string(s);
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

Outcome resolve(RawVerdict raw, Direction direction) noexcept {
    if (raw == RawVerdict::Tie) return Outcome::Tie;
    const bool first = raw == RawVerdict::Response1;
    if (direction == Direction::Forward) return first ? Outcome::ModelA : Outcome::ModelB;
    return first ? Outcome::ModelB : Outcome::ModelA;
}

Verdict Verdict::make(RawVerdict raw, Direction direction, bool degraded) {
    return Verdict{direction, raw, resolve(raw, direction), degraded};
}

std::optional<NodeScore> NodeScore::from_components(int a, int b) noexcept {
    if (a + b != 2 || a < 0 || b < 0) return std::nullopt;
    return NodeScore(a, b);
}

std::optional<Slot> NodeScore::winner() const noexcept {
    if (a_ == 2) return Slot::A;
    if (b_ == 2) return Slot::B;
    return std::nullopt;
}

std::vector<std::string> SessionMemory::questions() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.question);
    return out;
}

}  // namespace treejudge
