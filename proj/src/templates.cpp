#include "treejudge/templates.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "builtin_templates.hpp"
#include "treejudge/errors.hpp"

namespace treejudge {

namespace {

std::string strip_final_newline(std::string s) {
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot read template " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return strip_final_newline(ss.str());
}

}  // namespace

const TemplateSet& TemplateSet::builtin() {
    static const TemplateSet set{
        strip_final_newline(std::string(builtin_templates::kExaminer)),
        strip_final_newline(std::string(builtin_templates::kJudge)),
        strip_final_newline(std::string(builtin_templates::kNer)),
    };
    return set;
}

TemplateSet TemplateSet::load(const std::string& dir) {
    const std::filesystem::path root(dir);
    return TemplateSet{read_file(root / "examiner.txt"), read_file(root / "judge.txt"), read_file(root / "ner.txt")};
}

std::string render(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            const std::size_t close = tmpl.find('}', i + 1);
            if (close != std::string_view::npos) {
                auto it = values.find(tmpl.substr(i + 1, close - i - 1));
                if (it != values.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += tmpl[i++];
    }
    return out;
}

}  // namespace treejudge
