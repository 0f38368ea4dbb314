// Shared helpers for the unit and acceptance tests.

#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <map>
#include <memory>
#include <random>
#include <string>

#include <unistd.h>

#include "treejudge/chat.hpp"
#include "treejudge/config.hpp"
#include "treejudge/controller.hpp"
#include "treejudge/embedding.hpp"
#include "treejudge/scripted.hpp"
#include "treejudge/synthetic.hpp"
#include "treejudge/templates.hpp"

namespace tjtest {

using namespace treejudge;

inline std::string fixture(const std::string& rel) { return std::string(TREEJUDGE_FIXTURE_DIR) + "/" + rel; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("treejudge-test-" + name + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Embedder with hand-picked vectors; unknown text maps to e0.
class TableEmbedder final : public Embedder {
public:
    explicit TableEmbedder(std::map<std::string, Vector> table, std::size_t dim = 2)
        : table_(std::move(table)), dim_(dim) {}

    Vector embed(const std::string& text) override {
        if (auto it = table_.find(text); it != table_.end()) return it->second;
        Vector v(dim_, 0.0);
        v[0] = 1.0;
        return v;
    }
    std::size_t dimension() const override { return dim_; }

private:
    std::map<std::string, Vector> table_;
    std::size_t dim_;
};

inline std::string verdict_json(const std::string& value) { return R"({"Eval_result": ")" + value + R"("})"; }

/// Examiner that asks about the topic named in its prompt, with a per-call
/// variant so candidates differ.
inline FunctionBackend topic_examiner() {
    return FunctionBackend("examiner", [](std::span<const Message> m, const CompletionOptions& o) {
        const std::string p = user_text(m);
        const std::string lead = "ask a question about ";
        auto s = p.find(lead) + lead.size();
        auto e = p.find(". ", s);
        return R"({"question": "How does )" + p.substr(s, e - s) + " work? v" + std::to_string(o.seed % 97) + R"("})";
    });
}

/// Answers echo the question.
inline FunctionBackend echo_model(const std::string& name) {
    return FunctionBackend(name, [name](std::span<const Message> m, const CompletionOptions&) {
        return name + " answers: " + user_text(m);
    });
}

inline FunctionBackend constant_judge(const std::string& value) {
    return FunctionBackend("judge", [value](std::span<const Message>, const CompletionOptions&) { return verdict_json(value); });
}

/// Extraction that returns three labels derived from the node topic so every
/// tie can fan out fully: "<topic>.1", "<topic>.2", "<topic>.3".
inline FunctionBackend fanout_ner() {
    return FunctionBackend("ner", [](std::span<const Message> m, const CompletionOptions&) {
        const std::string p = user_text(m);
        const auto at = p.rfind("[topic]:");
        const auto end = p.find('\n', at);
        const std::string topic = p.substr(at + 8, end - at - 8);
        return "[\"" + topic + ".1\", \"" + topic + ".2\", \"" + topic + ".3\"]";
    });
}

/// A complete set of in-memory providers.
struct Rig {
    FunctionBackend model_a = echo_model("A");
    FunctionBackend model_b = echo_model("B");
    FunctionBackend examiner = topic_examiner();
    FunctionBackend judge = constant_judge("Tie");
    FunctionBackend ner = fanout_ner();
    MockEmbedder embedder;

    Backends view() { return Backends{model_a, model_b, examiner, judge, ner, embedder}; }
};

inline EvalConfig small_config(std::vector<std::string> topics = {"Networks"}) {
    EvalConfig c;
    c.predefined_topics = std::move(topics);
    c.repeats = 1;
    c.seed = 42;
    return c;
}

/// Scripted ablation fixture from tests/fixtures/ablation.
struct ScriptedRig {
    ScriptedBackend model_a = ScriptedBackend::from_file(fixture("ablation/model_a.json"));
    ScriptedBackend model_b = ScriptedBackend::from_file(fixture("ablation/model_b.json"));
    ScriptedBackend examiner = ScriptedBackend::from_file(fixture("ablation/examiner.json"));
    ScriptedBackend judge = ScriptedBackend::from_file(fixture("ablation/judge.json"));
    ScriptedBackend ner = ScriptedBackend::from_file(fixture("ablation/ner.json"));
    MockEmbedder embedder;

    Backends view() { return Backends{model_a, model_b, examiner, judge, ner, embedder}; }
};

/// Synthetic pair: A at `skill_a`, B at `skill_b`, all roles simulated.
struct SyntheticRig {
    SyntheticRig(double skill_a, double skill_b, double tie_band)
        : model_a("synthetic-a", SkillTable{{}, skill_a}), model_b("synthetic-b", SkillTable{{}, skill_b}),
          judge(tie_band) {}

    SyntheticAgent model_a;
    SyntheticAgent model_b;
    SyntheticExaminer examiner;
    OracleJudge judge;
    SyntheticNer ner;
    MockEmbedder embedder;

    Backends view() { return Backends{model_a, model_b, examiner, judge, ner, embedder}; }
};

}  // namespace tjtest
