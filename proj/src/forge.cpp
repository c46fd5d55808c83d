#include "persim/forge.hpp"

#include <sstream>

#include "persim/util.hpp"

namespace persim {

namespace {

bool known(const std::string& v) { return !v.empty() && v != "?"; }

std::string country_display(const std::string& token) {
    if (token == "United-States") return "the United States";
    std::string out = token;
    for (auto& c : out)
        if (c == '-') c = ' ';
    return out;
}

std::string gender_noun(const std::string& gender, int age) {
    std::string g = to_lower(gender);
    if (g == "male") return age < 18 ? "boy" : "man";
    if (g == "female") return age < 18 ? "girl" : "woman";
    return "person";
}

ChatRequest forge_request(const TemplateSet& templates, const PromptTemplate& body,
                          const PersonaSkeleton& skeleton, const std::string& strategy,
                          std::uint64_t seed) {
    ChatRequest req;
    req.system_text = templates.forge_system.text;
    req.user_text = render_template(body, {{"skeleton", skeleton_description(skeleton)}});
    req.tag = "forge;strategy=" + strategy + ";skeleton=" + skeleton.id +
              ";seed=" + std::to_string(seed);
    return req;
}

PersonaProfile make_profile(const std::string& id, const PersonaSkeleton& skeleton,
                            Strategy strategy, const std::string& text,
                            const std::string& template_hash) {
    PersonaProfile p;
    p.id = id;
    p.skeleton_id = skeleton.id;
    p.text = text;
    p.strategy = strategy;
    p.detail_level = DetailLevel::standard;
    p.source = ProfileSource::synthesized;
    p.word_cnt = word_count(text);
    p.template_hash = template_hash;
    return p;
}

}  // namespace

std::string skeleton_description(const PersonaSkeleton& s) {
    std::ostringstream out;
    out << "- age: " << s.age << "\n";
    out << "- gender: " << s.gender << "\n";
    if (known(s.race)) out << "- race: " << s.race << "\n";
    if (known(s.education)) out << "- education: " << s.education << "\n";
    if (known(s.occupation)) out << "- occupation: " << s.occupation << "\n";
    if (known(s.workclass)) out << "- workclass: " << s.workclass << "\n";
    if (known(s.country)) out << "- country: " << s.country << "\n";
    if (known(s.income_bracket)) out << "- annual income bracket: " << s.income_bracket << "\n";
    out << "- capital gains: " << s.capital_gain << "\n";
    out << "- capital losses: " << s.capital_loss << "\n";
    return out.str();
}

PersonaProfile enrich_standard(Gateway& gateway, const TemplateSet& templates,
                               const PersonaSkeleton& skeleton, const std::string& profile_id,
                               std::uint64_t seed) {
    skeleton.validate();
    auto req = forge_request(templates, templates.forge_standard, skeleton, "standard", seed);
    ChatResponse res;
    try {
        res = gateway.complete(req);
    } catch (const ProviderError& e) {
        throw ProviderError("skeleton " + skeleton.id + ": " + e.what());
    }
    return make_profile(profile_id, skeleton, Strategy::standard, res.text,
                        templates.forge_standard.hash);
}

PersonaProfile enrich_narrative(Gateway& gateway, const TemplateSet& templates,
                                const PersonaSkeleton& skeleton, const std::string& profile_id,
                                std::uint64_t seed) {
    skeleton.validate();
    std::string text;
    constexpr std::size_t kWordFloor = 2000;
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto req = forge_request(templates, templates.forge_narrative, skeleton, "narrative",
                                 combine_seed(seed, static_cast<std::uint64_t>(attempt)));
        ChatResponse res;
        try {
            res = gateway.complete(req);
        } catch (const ProviderError& e) {
            throw ProviderError("skeleton " + skeleton.id + ": " + e.what());
        }
        text = res.text;
        if (word_count(text) >= kWordFloor) break;
    }
    auto p = make_profile(profile_id, skeleton, Strategy::narrative, text,
                          templates.forge_narrative.hash);
    if (p.word_cnt < kWordFloor) p.substandard = true;
    return p;
}

PersonaProfile simplify_to_poor(const PersonaProfile& profile,
                                const std::optional<PersonaSkeleton>& skeleton,
                                const std::string& profile_id) {
    if (profile.strategy == Strategy::poor) {
        PersonaProfile copy = profile;
        copy.id = profile_id;
        return copy;
    }

    std::ostringstream text;
    if (skeleton) {
        const auto& s = *skeleton;
        s.validate();
        text << "You are a " << s.age << "-year-old ";
        std::string noun = gender_noun(s.gender, s.age);
        bool descent_form = false;
        if (known(s.race)) {
            if (s.race == "Black" || s.race == "White") {
                text << s.race << " " << noun;
            } else if (s.race == "Asian-Pac-Islander") {
                text << noun << " of Asian-Pacific Islander descent";
                descent_form = true;
            } else if (s.race == "Amer-Indian-Eskimo") {
                text << noun << " of American Indian or Alaska Native descent";
                descent_form = true;
            } else {
                text << noun;
            }
        } else {
            text << noun;
        }
        if (known(s.country)) {
            if (descent_form) text << ",";
            text << " living in " << country_display(s.country);
        }
        if (known(s.occupation)) {
            std::string occ = to_lower(s.occupation);
            const char* article = std::string("aeiou").find(occ[0]) != std::string::npos ? "an" : "a";
            text << ", working";
            if (s.workclass == "Private") text << " in the private sector";
            else if (s.workclass.find("gov") != std::string::npos) text << " in the public sector";
            else if (s.workclass.rfind("Self-emp", 0) == 0) text << " in self-employment";
            text << " in " << article << " \"" << occ << "\" occupation";
        }
        text << ".";
    } else if (profile.age) {
        text << "You are a " << *profile.age << "-year-old person.";
    } else {
        throw ValidationError("profile " + profile.id +
                              ": cannot simplify without a skeleton or an age");
    }

    PersonaProfile p;
    p.id = profile_id;
    p.skeleton_id = profile.skeleton_id;
    p.text = text.str();
    p.strategy = Strategy::poor;
    p.detail_level = DetailLevel::poor;
    p.source = profile.source;
    p.word_cnt = word_count(p.text);
    p.age = profile.age;
    return p;
}

const std::string& antialign_instruction(const TemplateSet& templates) {
    return templates.antialign.text;
}

}  // namespace persim
