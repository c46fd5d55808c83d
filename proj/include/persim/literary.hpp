#pragma once

#include <optional>
#include <string>
#include <vector>

#include "persim/types.hpp"

namespace persim {

// One external character record as exported from a catalog query.
struct LiteraryRecord {
    std::string name;
    std::string description;
    std::optional<int> age;
    std::optional<std::string> gender;
};

// JSONL file of {name, description, age?, gender?} records. Records without
// a description are dropped (and counted via dropped, when non-null).
std::vector<PersonaProfile> load_literary_personas(const std::string& path,
                                                   std::size_t* dropped = nullptr);

PersonaProfile literary_profile(const LiteraryRecord& rec, std::size_t index);

// Age attached to external personas for population curves; persisted in the
// persona table, absent for synthesized profiles (their skeleton carries age).
std::optional<int> profile_age(const PersonaProfile& p);

}  // namespace persim
