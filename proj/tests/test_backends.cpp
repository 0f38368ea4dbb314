#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <random>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "support.hpp"
#include "treejudge/errors.hpp"
#include "treejudge/http.hpp"
#include "treejudge/seed.hpp"

using namespace treejudge;
using nlohmann::json;

namespace {

double norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// Transport returning canned responses in order; counts calls.
class CannedTransport final : public Transport {
public:
    explicit CannedTransport(std::deque<HttpResponse> responses) : responses_(std::move(responses)) {}
    HttpResponse post(const HttpRequest& request) override {
        ++calls;
        last = request;
        if (responses_.empty()) throw TransportFailure("connection refused");
        auto r = responses_.front();
        responses_.pop_front();
        if (r.status == 0) throw TransportFailure(r.body);
        return r;
    }
    int calls = 0;
    HttpRequest last;

private:
    std::deque<HttpResponse> responses_;
};

std::string chat_body(const std::string& content) {
    return json{{"choices", json::array({{{"message", {{"role", "assistant"}, {"content", content}}}}})}}.dump();
}

HttpEndpoint test_endpoint(int retry_limit = 3) {
    HttpEndpoint e;
    e.base_url = "http://127.0.0.1:9";
    e.model = "m";
    e.api_key_env = "";
    e.retry_limit = retry_limit;
    e.backoff_ms = 10;
    return e;
}

/// OpenAI-style server on an ephemeral localhost port.
class FakeServer {
public:
    FakeServer() {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            ++chat_calls;
            auth = req.get_header_value("Authorization");
            const auto body = json::parse(req.body);
            last_request = body;
            const std::string prompt = body["messages"].back()["content"];
            res.set_content(chat_body("echo: " + prompt), "application/json");
        });
        server_.Post("/v1/embeddings", [](const httplib::Request& req, httplib::Response& res) {
            const auto body = json::parse(req.body);
            const std::string input = body["input"];
            res.set_content(json{{"data", json::array({{{"embedding", {3.0, static_cast<double>(input.size())}}}})}}.dump(),
                            "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeServer() {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

    std::atomic<int> chat_calls{0};
    std::string auth;
    json last_request;

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace

TEST(Cosine, HandExamples) {
    const Vector x{1, 0}, y{0, 1}, u{0.8, 0.6}, v{0.6, 0.8};
    EXPECT_DOUBLE_EQ(cosine_similarity(x, x), 1.0);
    EXPECT_DOUBLE_EQ(cosine_similarity(x, y), 0.0);
    EXPECT_NEAR(cosine_similarity(u, v), 0.8 * 0.6 + 0.6 * 0.8, 1e-12);
    EXPECT_NEAR(cosine_similarity(u, v), 0.96, 1e-12);
    EXPECT_THROW(cosine_similarity(x, Vector{1, 0, 0}), DimensionMismatch);
}

TEST(MockEmbedder, DeterministicUnitNorm) {
    MockEmbedder e;
    EXPECT_EQ(e.embed("5G"), e.embed("5G"));
    EXPECT_EQ(e.embed("").size(), MockEmbedder::kDimension);
    EXPECT_NEAR(norm(e.embed("")), 1.0, 1e-12);
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> len(0, 40), ch(32, 126);
    for (int i = 0; i < 1000; ++i) {
        std::string s;
        for (int n = len(rng); n > 0; --n) s.push_back(static_cast<char>(ch(rng)));
        ASSERT_NEAR(norm(e.embed(s)), 1.0, 1e-6) << s;
    }
}

TEST(MockEmbedder, NgramOverlapOrdersSimilarity) {
    MockEmbedder e;
    const auto a = e.embed("5G networks");
    EXPECT_GT(cosine_similarity(a, e.embed("5G network")), cosine_similarity(a, e.embed("opera history")));
}

TEST(CachedEmbedder, HitsReturnIdenticalVectors) {
    auto inner = std::make_shared<MockEmbedder>();
    CachedEmbedder cached(inner);
    const auto first = cached.embed("topic");
    EXPECT_EQ(cached.embed("topic"), first);
    EXPECT_EQ(first, inner->embed("topic"));
    EXPECT_EQ(cached.cache_size(), 1u);
}

TEST(Synthetic, SkillLookupByPrefix) {
    SyntheticAgent agent("x", SkillTable{{{"Technology", 2.0}, {"Technology and Communication > 5G", 3.0}}, -1.0});
    EXPECT_EQ(read_skill_tag(synthetic_answer(agent, "q", "Technology > 5G")), 2.0);
    EXPECT_EQ(read_skill_tag(synthetic_answer(agent, "q", "technology and communication > 5G > ethics")), 3.0);
    EXPECT_EQ(read_skill_tag(synthetic_answer(agent, "q", "Opera")), -1.0);
    EXPECT_EQ(synthetic_answer(agent, "q", "Opera"), synthetic_answer(agent, "q", "Opera"));
}

TEST(Synthetic, SkillTableFromFile) {
    const auto dir = tjtest::scratch_dir("skills");
    std::ofstream(dir / "skills.json") << R"({"default": 0.5, "skills": {"Science": 4}})";
    const auto t = SkillTable::parse((dir / "skills.json").string());
    EXPECT_EQ(t.effective("Science and Nature"), 4.0);
    EXPECT_EQ(t.effective("Food"), 0.5);
    EXPECT_EQ(SkillTable::parse("2.5").default_skill, 2.5);
    EXPECT_THROW(SkillTable::parse((dir / "nope.json").string()), ConfigError);
}

TEST(Synthetic, AnswerCarriesSubtopicsForExtraction) {
    SyntheticAgent agent("x", SkillTable{{}, 1.0});
    const auto answer = synthetic_answer(agent, "What should an expert know about Food? (facet 3)", "Food");
    SyntheticNer ner;
    const Messages prompt{{Role::User, "[answer]:" + answer + "\n"}};
    const auto labels = json::parse(ner.complete(prompt, {}));
    ASSERT_EQ(labels.size(), 3u);
    for (const auto& l : labels) EXPECT_EQ(l.get<std::string>().rfind("Food > ", 0), 0u);
}

TEST(OracleJudge, SymmetricSkillsTie) {
    for (std::uint64_t s = 0; s < 100; ++s) EXPECT_EQ(oracle_judge(2.0, 2.0, 0.1, s), Outcome::Tie);
}

TEST(OracleJudge, LargeGapAlmostAlwaysWins) {
    int wins = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) wins += oracle_judge(10, -10, 0.1, derive_seed(9, {s})) == Outcome::ModelA;
    EXPECT_GT(wins / 1000.0, 0.999 - 1e-12);
}

TEST(OracleJudge, EmpiricalRateMatchesLogistic) {
    const double expected = 1.0 / (1.0 + std::exp(-0.5));
    EXPECT_NEAR(expected, 0.622, 0.001);
    int wins = 0;
    for (std::uint64_t s = 0; s < 10000; ++s) wins += oracle_judge(0.5, 0.0, 0.0, derive_seed(17, {s})) == Outcome::ModelA;
    EXPECT_NEAR(wins / 10000.0, expected, 0.03);
}

TEST(Scripted, PureFunctionOfPromptAndSeed) {
    ScriptedBackend b("s", json{{"rules", json::array({{{"contains", {"hello"}}, {"responses", {"r1", "r2", "r3"}}},
                                                       {{"regex", "about (\\w+)"}, {"responses", {"topic=$1"}}}})},
                                {"default", {"fallback"}}});
    const Messages hello{{Role::User, "hello there"}};
    EXPECT_EQ(b.complete(hello, {1.0, 5}), b.complete(hello, {1.0, 5}));
    std::set<std::string> outs;
    for (std::uint64_t s = 0; s < 50; ++s) outs.insert(b.complete(hello, {1.0, s}));
    EXPECT_EQ(outs, (std::set<std::string>{"r1", "r2", "r3"}));
    EXPECT_EQ(b.complete(Messages{{Role::User, "ask about cats"}}, {}), "topic=cats");
    EXPECT_EQ(b.complete(Messages{{Role::User, "zzz"}}, {}), "fallback");
    ScriptedBackend strict("s", json{{"rules", json::array()}});
    EXPECT_THROW(strict.complete(hello, {}), BackendError);
}

TEST(Http, RetriesTransientThenSucceeds) {
    auto t = std::make_shared<CannedTransport>(
        std::deque<HttpResponse>{{429, ""}, {429, ""}, {429, ""}, {200, chat_body("hi")}});
    std::vector<long long> sleeps;
    HttpChatBackend chat(test_endpoint(3), t, [&](std::chrono::milliseconds d) { sleeps.push_back(d.count()); });
    EXPECT_EQ(chat.complete(Messages{{Role::User, "x"}}, {}), "hi");
    EXPECT_EQ(t->calls, 4);
    EXPECT_EQ(sleeps, (std::vector<long long>{10, 20, 40}));
}

TEST(Http, ExhaustionRaisesTimeoutNamingEndpoint) {
    auto t = std::make_shared<CannedTransport>(std::deque<HttpResponse>{{503, ""}, {0, "reset"}, {429, ""}, {500, ""}});
    HttpChatBackend chat(test_endpoint(3), t, [](auto) {});
    try {
        chat.complete(Messages{{Role::User, "x"}}, {});
        FAIL();
    } catch (const BackendError& e) {
        EXPECT_EQ(e.kind(), BackendError::Kind::Timeout);
        EXPECT_EQ(e.endpoint(), "http://127.0.0.1:9#m");
    }
    EXPECT_EQ(t->calls, 4);
}

TEST(Http, NonTransientStatusFailsImmediately) {
    auto t = std::make_shared<CannedTransport>(std::deque<HttpResponse>{{400, "bad"}});
    HttpChatBackend chat(test_endpoint(3), t, [](auto) {});
    try {
        chat.complete(Messages{{Role::User, "x"}}, {});
        FAIL();
    } catch (const BackendError& e) {
        EXPECT_EQ(e.kind(), BackendError::Kind::HttpStatus);
        EXPECT_EQ(e.status(), 400);
    }
    EXPECT_EQ(t->calls, 1);
}

TEST(Http, MalformedAndMissingAuth) {
    auto t = std::make_shared<CannedTransport>(std::deque<HttpResponse>{{200, R"({"choices": []})"}});
    HttpChatBackend chat(test_endpoint(), t, [](auto) {});
    try {
        chat.complete(Messages{{Role::User, "x"}}, {});
        FAIL();
    } catch (const BackendError& e) {
        EXPECT_EQ(e.kind(), BackendError::Kind::MalformedResponse);
    }
    auto endpoint = test_endpoint();
    endpoint.api_key_env = "TREEJUDGE_TEST_UNSET_KEY";
    ::unsetenv("TREEJUDGE_TEST_UNSET_KEY");
    HttpChatBackend authless(endpoint, std::make_shared<CannedTransport>(std::deque<HttpResponse>{}), [](auto) {});
    try {
        authless.complete(Messages{{Role::User, "x"}}, {});
        FAIL();
    } catch (const BackendError& e) {
        EXPECT_EQ(e.kind(), BackendError::Kind::AuthMissing);
    }
}

TEST(Http, WireProtocolAgainstLocalServer) {
    FakeServer server;
    ::setenv("TREEJUDGE_TEST_KEY", "sekret", 1);
    HttpEndpoint e;
    e.base_url = server.url();
    e.model = "tiny";
    e.api_key_env = "TREEJUDGE_TEST_KEY";
    auto transport = std::make_shared<HttplibTransport>();
    HttpChatBackend chat(e, transport);
    const Messages msgs{{Role::System, "be brief"}, {Role::User, "hello"}};
    EXPECT_EQ(chat.complete(msgs, {0.5, 0}), "echo: hello");
    EXPECT_EQ(server.auth, "Bearer sekret");
    EXPECT_EQ(server.last_request["model"], "tiny");
    EXPECT_EQ(server.last_request["temperature"], 0.5);
    EXPECT_EQ(server.last_request["messages"][0]["role"], "system");

    e.path = "/v1/embeddings";
    HttpEmbedder embedder(e, transport);
    const auto v = embedder.embed("abcd");  // (3, 4) normalized
    ASSERT_EQ(v.size(), 2u);
    EXPECT_NEAR(v[0], 0.6, 1e-12);
    EXPECT_NEAR(v[1], 0.8, 1e-12);
    EXPECT_EQ(embedder.dimension(), 2u);
}

TEST(Http, RecordThenReplayWithoutServer) {
    const auto dir = tjtest::scratch_dir("replay");
    const auto path = (dir / "calls.jsonl").string();
    std::vector<std::string> recorded;
    std::string url;
    {
        FakeServer server;
        url = server.url();
        HttpEndpoint e;
        e.base_url = url;
        e.model = "tiny";
        e.api_key_env = "";
        auto store = std::make_shared<ReplayStore>(path, ReplayStore::Mode::Record);
        HttpChatBackend chat(e, std::make_shared<RecordingTransport>(std::make_shared<HttplibTransport>(), store));
        for (const char* p : {"one", "two", "three"}) recorded.push_back(chat.complete(Messages{{Role::User, p}}, {}));
        EXPECT_EQ(store->size(), 3u);
    }
    // Server is gone and no credentials are set: replay must not need either.
    HttpEndpoint e;
    e.base_url = url;
    e.model = "tiny";
    e.api_key_env = "TREEJUDGE_TEST_UNSET_KEY";
    ::unsetenv("TREEJUDGE_TEST_UNSET_KEY");
    auto store = std::make_shared<ReplayStore>(path, ReplayStore::Mode::Replay);
    HttpChatBackend replay(e, std::make_shared<ReplayTransport>(store));
    std::vector<std::string> replayed;
    for (const char* p : {"one", "two", "three"}) replayed.push_back(replay.complete(Messages{{Role::User, p}}, {}));
    EXPECT_EQ(replayed, recorded);
    EXPECT_THROW(replay.complete(Messages{{Role::User, "four"}}, {}), BackendError);
}

TEST(Http, ReplayReproducesRetriesAndDetectsDivergence) {
    const auto dir = tjtest::scratch_dir("replay2");
    const auto path = (dir / "calls.jsonl").string();
    auto canned = std::make_shared<CannedTransport>(
        std::deque<HttpResponse>{{0, "reset"}, {429, ""}, {200, chat_body("first")}, {200, chat_body("second")}});
    {
        auto store = std::make_shared<ReplayStore>(path, ReplayStore::Mode::Record);
        HttpChatBackend chat(test_endpoint(), std::make_shared<RecordingTransport>(canned, store), [](auto) {});
        EXPECT_EQ(chat.complete(Messages{{Role::User, "a"}}, {}), "first");
        EXPECT_EQ(chat.complete(Messages{{Role::User, "b"}}, {}), "second");
        EXPECT_EQ(store->size(), 4u);
    }
    auto store = std::make_shared<ReplayStore>(path, ReplayStore::Mode::Replay);
    int sleeps = 0;
    HttpChatBackend replay(test_endpoint(), std::make_shared<ReplayTransport>(store), [&](auto) { ++sleeps; });
    EXPECT_EQ(replay.complete(Messages{{Role::User, "a"}}, {}), "first");
    EXPECT_EQ(sleeps, 0);
    try {
        replay.complete(Messages{{Role::User, "different"}}, {});
        FAIL();
    } catch (const BackendError& e) {
        EXPECT_EQ(e.kind(), BackendError::Kind::ReplayMismatch);
    }
}
