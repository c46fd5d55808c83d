#include "persim/literary.hpp"

#include <fstream>

#include <json.hpp>

#include "persim/util.hpp"

namespace persim {

PersonaProfile literary_profile(const LiteraryRecord& rec, std::size_t index) {
    PersonaProfile p;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "lit-%06zu", index + 1);
    p.id = buf;
    p.strategy = Strategy::literary;
    p.detail_level = DetailLevel::standard;
    p.source = ProfileSource::external;
    p.age = rec.age;
    // The description is the profile; exported catalog descriptions are
    // expected to name their character.
    p.text = rec.description;
    p.word_cnt = word_count(p.text);
    return p;
}

std::vector<PersonaProfile> load_literary_personas(const std::string& path,
                                                   std::size_t* dropped) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open literary persona file: " + path);
    std::vector<PersonaProfile> out;
    std::size_t skipped = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(t);
        } catch (const nlohmann::json::exception& e) {
            throw DataError("literary persona file line " + std::to_string(line_no) + ": " +
                            e.what());
        }
        LiteraryRecord rec;
        rec.name = j.value("name", "");
        rec.description = j.value("description", "");
        if (j.contains("age") && j["age"].is_number_integer()) rec.age = j["age"].get<int>();
        if (j.contains("gender") && j["gender"].is_string())
            rec.gender = j["gender"].get<std::string>();
        if (trim(rec.description).empty()) {
            ++skipped;
            continue;
        }
        out.push_back(literary_profile(rec, out.size()));
    }
    if (dropped) *dropped = skipped;
    return out;
}

std::optional<int> profile_age(const PersonaProfile& p) { return p.age; }

}  // namespace persim
