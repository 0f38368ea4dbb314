#include <gtest/gtest.h>

#include <set>

#include <nlohmann/json.hpp>

#include "support.hpp"
#include "treejudge/errors.hpp"
#include "treejudge/json_extract.hpp"
#include "treejudge/seed.hpp"
#include "treejudge/types.hpp"

using namespace treejudge;
using nlohmann::json;

TEST(Types, VerdictResolutionRules) {
    EXPECT_EQ(resolve(RawVerdict::Response1, Direction::Forward), Outcome::ModelA);
    EXPECT_EQ(resolve(RawVerdict::Response2, Direction::Forward), Outcome::ModelB);
    EXPECT_EQ(resolve(RawVerdict::Response1, Direction::Swapped), Outcome::ModelB);
    EXPECT_EQ(resolve(RawVerdict::Response2, Direction::Swapped), Outcome::ModelA);
    EXPECT_EQ(resolve(RawVerdict::Tie, Direction::Forward), Outcome::Tie);
    EXPECT_EQ(resolve(RawVerdict::Tie, Direction::Swapped), Outcome::Tie);
}

TEST(Types, NodeScoreComponents) {
    EXPECT_EQ(NodeScore::tie().a(), 1);
    EXPECT_EQ(NodeScore::win(Slot::A).a(), 2);
    EXPECT_EQ(NodeScore::win(Slot::B).b(), 2);
    EXPECT_EQ(NodeScore::win(Slot::A).swapped(), NodeScore::win(Slot::B));
    EXPECT_EQ(NodeScore::win(Slot::B).winner(), Slot::B);
    EXPECT_FALSE(NodeScore::tie().winner());
    EXPECT_TRUE(NodeScore::from_components(1, 1));
    EXPECT_TRUE(NodeScore::from_components(0, 2));
    EXPECT_FALSE(NodeScore::from_components(2, 2));
    EXPECT_FALSE(NodeScore::from_components(3, -1));
}

TEST(Types, StringTablesRoundTrip) {
    for (auto s : {NodeStatus::Open, NodeStatus::NonTie, NodeStatus::SiblingDominance, NodeStatus::MaxDepth,
                   NodeStatus::NoTopics})
        EXPECT_EQ(node_status_from_string(to_string(s)), s);
    for (auto o : {OriginSlot::None, OriginSlot::A, OriginSlot::B, OriginSlot::Both})
        EXPECT_EQ(origin_slot_from_string(to_string(o)), o);
    for (auto o : {TopicOrigin::Predefined, TopicOrigin::FromAnswer, TopicOrigin::Inherited})
        EXPECT_EQ(topic_origin_from_string(to_string(o)), o);
    for (auto v : {RawVerdict::Response1, RawVerdict::Response2, RawVerdict::Tie})
        EXPECT_EQ(raw_verdict_from_string(to_string(v)), v);
    EXPECT_FALSE(node_status_from_string("bogus"));
}

TEST(Types, TopicFactoriesKeepOriginInvariant) {
    const auto root = Topic::predefined("5G");
    EXPECT_EQ(root.label, "5G");
    EXPECT_FALSE(root.parent_node);
    EXPECT_EQ(root.origin, TopicOrigin::Predefined);
    const auto child = Topic::from_answer("IoT", OriginSlot::B, 4);
    EXPECT_EQ(child.parent_node, 4u);
    EXPECT_EQ(child.origin_slot, OriginSlot::B);
}

TEST(Types, MemoryIsAppendOnlyInOrder) {
    SessionMemory m;
    m.append({"t1", "q1", "a", "b"});
    m.append({"t2", "q2", "a", "b"});
    EXPECT_EQ(m.questions(), (std::vector<std::string>{"q1", "q2"}));
}

TEST(Seed, DerivationIsPureAndSensitive) {
    EXPECT_EQ(derive_seed(7, "judge"), derive_seed(7, "judge"));
    EXPECT_NE(derive_seed(7, "judge"), derive_seed(7, "examiner"));
    EXPECT_NE(derive_seed(7, "child", {0}), derive_seed(7, "child", {1}));
    EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(1, {i}));
    EXPECT_EQ(seen.size(), 1000u);
}

TEST(Seed, UnitIntervalIsUniformEnough) {
    double sum = 0.0;
    for (std::uint64_t i = 0; i < 20000; ++i) {
        const double u = unit_interval(derive_seed(3, {i}));
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 20000.0, 0.5, 0.01);
}

TEST(Config, EmptyDocumentGivesDefaults) {
    const auto c = validate_config(json::object());
    EXPECT_EQ(c.max_depth, 3);
    EXPECT_EQ(c.branching, 3);
    EXPECT_EQ(c.question_candidates, 3);
    EXPECT_DOUBLE_EQ(c.alpha, 1.0);
    EXPECT_DOUBLE_EQ(c.beta, 1.0);
    EXPECT_DOUBLE_EQ(c.gamma, 0.4);
    EXPECT_DOUBLE_EQ(c.temperature, 1.0);
    EXPECT_EQ(c.repeats, 3);
    EXPECT_EQ(c.traversal, Traversal::BFS);
    EXPECT_TRUE(c.step_one_enabled);
    EXPECT_FALSE(c.predefined_topics.empty());
}

TEST(Config, MaxDepthZeroIsOutOfRange) {
    try {
        validate_config(json{{"max_depth", 0}});
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.kind(), ConfigError::Kind::OutOfRange);
        EXPECT_EQ(e.field(), "max_depth");
    }
}

TEST(Config, GammaZeroAccepted) { EXPECT_DOUBLE_EQ(validate_config(json{{"gamma", 0.0}}).gamma, 0.0); }

TEST(Config, Rejections) {
    auto kind_of = [](const json& j) {
        try {
            validate_config(j);
        } catch (const ConfigError& e) {
            return std::optional<ConfigError::Kind>(e.kind());
        }
        return std::optional<ConfigError::Kind>();
    };
    EXPECT_EQ(kind_of(json{{"predefined_topics", json::array()}}), ConfigError::Kind::EmptyTopicList);
    EXPECT_EQ(kind_of(json{{"alpha", -0.1}}), ConfigError::Kind::OutOfRange);
    EXPECT_EQ(kind_of(json{{"repeats", 0}}), ConfigError::Kind::OutOfRange);
    EXPECT_EQ(kind_of(json{{"branching", "3"}}), ConfigError::Kind::TypeMismatch);
    EXPECT_EQ(kind_of(json{{"max_depht", 3}}), ConfigError::Kind::UnknownField);
    EXPECT_EQ(kind_of(json{{"seed", nullptr}}), ConfigError::Kind::MissingField);
    EXPECT_EQ(kind_of(json{{"traversal", "random"}}), ConfigError::Kind::OutOfRange);
    EXPECT_EQ(kind_of(json{{"backends", {{"replay_mode", "record"}}}}), ConfigError::Kind::MissingField);
}

TEST(Config, TraversalAndTopicsParsed) {
    const auto c = validate_config(json{{"traversal", "dfs"}, {"predefined_topics", {"A", "B"}}, {"seed", 99}});
    EXPECT_EQ(c.traversal, Traversal::DFS);
    EXPECT_EQ(c.predefined_topics, (std::vector<std::string>{"A", "B"}));
    EXPECT_EQ(c.seed, 99u);
}

TEST(Config, SnapshotRoundTrips) {
    EvalConfig c;
    c.max_depth = 4;
    c.gamma = 0.25;
    c.seed = 123456789012345ULL;
    c.traversal = Traversal::DFS;
    c.predefined_topics = {"x", "y"};
    c.backends.judge = "mock:/tmp/judge.json";
    c.sibling_group_includes_self = false;
    EXPECT_EQ(validate_config(config_to_json(c)), c);
    EXPECT_EQ(validate_config(json::parse(config_to_json(c).dump())), c);
}

TEST(JsonExtract, FirstObjectInsideProse) {
    const auto j = first_json_object(R"(Sure! {"question": "How does 5G reduce latency?"} Hope that helps.)");
    ASSERT_TRUE(j);
    EXPECT_EQ((*j)["question"], "How does 5G reduce latency?");
}

TEST(JsonExtract, BracesInsideStringsAndBrokenPrefix) {
    const auto j = first_json_object(R"(noise {not json} then {"a": "x}{y", "b": {"c": 1}} tail)");
    ASSERT_TRUE(j);
    EXPECT_EQ((*j)["a"], "x}{y");
    EXPECT_FALSE(first_json_object("no braces here"));
}

TEST(JsonExtract, ListAfterLabelBrackets) {
    const auto j = first_json_array(R"([subtopic] : ["python","C++","R language"])");
    ASSERT_TRUE(j);
    EXPECT_EQ(j->size(), 3u);
    EXPECT_EQ((*j)[2], "R language");
}
