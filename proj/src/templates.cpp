#include "persim/templates.hpp"

#include "persim/util.hpp"

namespace persim {

namespace {

PromptTemplate load_one(const std::string& dir, const std::string& name) {
    PromptTemplate t;
    t.text = read_file(dir + "/" + name);
    t.hash = hex64(fnv1a64(t.text));
    return t;
}

}  // namespace

TemplateSet TemplateSet::load(const std::string& dir) {
    TemplateSet s;
    s.assess_system = load_one(dir, "assess_system.txt");
    s.assess_system_baseline = load_one(dir, "assess_system_baseline.txt");
    s.assess_sheet = load_one(dir, "assess_sheet.txt");
    s.assess_sheet_strict = load_one(dir, "assess_sheet_strict.txt");
    s.antialign = load_one(dir, "antialign.txt");
    s.forge_system = load_one(dir, "forge_system.txt");
    s.forge_standard = load_one(dir, "forge_standard.txt");
    s.forge_narrative = load_one(dir, "forge_narrative.txt");
    return s;
}

std::string render_template(const PromptTemplate& tpl,
                            const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(tpl.text.size());
    for (std::size_t i = 0; i < tpl.text.size();) {
        if (tpl.text[i] == '{') {
            auto close = tpl.text.find('}', i);
            if (close != std::string::npos) {
                std::string key = tpl.text.substr(i + 1, close - i - 1);
                auto it = vars.find(key);
                if (it == vars.end())
                    throw ValidationError("template placeholder {" + key + "} not provided");
                out += it->second;
                i = close + 1;
                continue;
            }
        }
        out += tpl.text[i++];
    }
    return out;
}

}  // namespace persim
