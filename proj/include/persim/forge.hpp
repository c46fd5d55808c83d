#pragma once

#include <optional>
#include <string>

#include "persim/gateway.hpp"
#include "persim/templates.hpp"
#include "persim/types.hpp"

namespace persim {

// Human-readable fact block embedded in enrichment prompts, one "- key: value"
// line per known skeleton field.
std::string skeleton_description(const PersonaSkeleton& s);

// Full-detail profile via the standard enrichment template. Gateway failures
// propagate as ProviderError with the skeleton id attached.
PersonaProfile enrich_standard(Gateway& gateway, const TemplateSet& templates,
                               const PersonaSkeleton& skeleton, const std::string& profile_id,
                               std::uint64_t seed);

// Novelist-framed life story; must reach 2,000 words. One regeneration
// attempt when short; a still-short profile is kept and flagged substandard.
PersonaProfile enrich_narrative(Gateway& gateway, const TemplateSet& templates,
                                const PersonaSkeleton& skeleton, const std::string& profile_id,
                                std::uint64_t seed);

// One-to-two-sentence profile carrying at most {age, gender, race, country,
// occupation}. Idempotent: a poor profile simplifies to itself.
PersonaProfile simplify_to_poor(const PersonaProfile& profile,
                                const std::optional<PersonaSkeleton>& skeleton,
                                const std::string& profile_id);

// Verbatim anti-alignment instruction appended to assessment prompts.
// Byte-identical across calls for one loaded template set.
const std::string& antialign_instruction(const TemplateSet& templates);

}  // namespace persim
