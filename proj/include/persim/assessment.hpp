#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "persim/gateway.hpp"
#include "persim/item_bank.hpp"
#include "persim/templates.hpp"
#include "persim/types.hpp"

namespace persim {

// Structured parse failures; run_assessment retries once on any of these.
struct SheetParseError : ValidationError {
    using ValidationError::ValidationError;
};
struct MissingItemsError : SheetParseError {
    std::vector<int> missing;
    explicit MissingItemsError(std::vector<int> ids);
};
struct DuplicateItemError : SheetParseError {
    int item_id;
    explicit DuplicateItemError(int id);
};
struct ChoiceOutOfRangeError : SheetParseError {
    int item_id;
    ChoiceOutOfRangeError(int id, const std::string& token);
};

// Sheet i holds items [20i+1 .. 20i+20] in instrument order.
std::array<std::vector<QuestionnaireItem>, 6> partition_sheets(const ItemBank& bank);

// System text = role-play instruction + persona (+ anti-alignment fragment);
// user text = the 20 items with the scale legend and answer-format contract.
ChatRequest build_sheet_prompt(const TemplateSet& templates, const PersonaProfile& profile,
                               std::span<const QuestionnaireItem> sheet_items, int sheet_index,
                               bool antialign, std::uint64_t assessment_seed,
                               bool strict_retry = false);

// Baseline variant: no persona at all (model answers as itself).
ChatRequest build_baseline_sheet_prompt(const TemplateSet& templates,
                                        std::span<const QuestionnaireItem> sheet_items,
                                        int sheet_index, std::uint64_t assessment_seed);

// Tolerant answer grammar, one item per line:
//   Q?<id>[.:)] (answer|choice)? [:-]? <1-5|A-E>  [separator rationale]
// A..E map to 1..5. Exactly the sheet's 20 items must resolve.
AnswerSheet parse_sheet_response(const std::string& text,
                                 std::span<const QuestionnaireItem> sheet_items,
                                 int sheet_index);

struct ScoredAssessment {
    TraitVector raw;                  // domain raw scores, 24..120
    TraitVector rescaled;             // 0..100
    std::array<double, 30> facets{};  // raw facet scores 4..20, [domain*6 + facet-1]
};

// Keyed scoring: item score = choice (plus) or 6 - choice (minus);
// facet = sum of its 4 items; domain = sum of its 6 facets.
ScoredAssessment score_responses(std::span<const ItemResponse> responses, const ItemBank& bank);

struct SheetExchange {
    int sheet_index = 0;
    std::string raw_text;  // provider reply that parsed (possibly the retry)
    int attempts = 1;      // 1 or 2 (strict re-ask)
    AnswerSheet sheet;
};

struct AssessmentOutcome {
    std::string assessment_id;
    std::string persona_id;
    bool ok = false;
    std::string failure;            // set when !ok
    int failed_sheet = -1;          // set when !ok and a sheet was at fault
    ScoredAssessment scores;        // valid when ok
    std::vector<SheetExchange> sheets;
    std::vector<ItemResponse> responses;  // all 120, in item order, when ok
};

// One full six-sheet assessment. Parse failures get one strict-format
// re-ask; an unrecoverable sheet marks the assessment failed (recorded by
// the caller, never silently retried under a different id).
AssessmentOutcome run_assessment(Gateway& gateway, const TemplateSet& templates,
                                 const ItemBank& bank, const PersonaProfile& profile,
                                 bool antialign, const std::string& assessment_id,
                                 std::uint64_t assessment_seed);

// Appendix-style baseline assessment: role-play instruction only, no persona.
AssessmentOutcome run_baseline_assessment(Gateway& gateway, const TemplateSet& templates,
                                          const ItemBank& bank,
                                          const std::string& assessment_id,
                                          std::uint64_t assessment_seed);

}  // namespace persim
