#pragma once

#include <map>
#include <string>

#include "persim/types.hpp"

namespace persim {

// A prompt template file plus its content hash (stored with generated
// profiles for provenance).
struct PromptTemplate {
    std::string text;
    std::string hash;  // fnv1a64 of the file bytes, hex
};

struct TemplateSet {
    PromptTemplate assess_system;
    PromptTemplate assess_system_baseline;
    PromptTemplate assess_sheet;
    PromptTemplate assess_sheet_strict;
    PromptTemplate antialign;
    PromptTemplate forge_system;
    PromptTemplate forge_standard;
    PromptTemplate forge_narrative;

    static TemplateSet load(const std::string& dir);
};

// Replaces every "{key}" with vars.at(key); throws ValidationError when the
// template names a placeholder the map does not provide.
std::string render_template(const PromptTemplate& tpl,
                            const std::map<std::string, std::string>& vars);

}  // namespace persim
