#include "persim/assessment.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "persim/mock_gateway.hpp"
#include "persim/util.hpp"

namespace persim {

namespace {

std::string join_ids(const std::vector<int>& ids) {
    std::ostringstream s;
    for (std::size_t i = 0; i < ids.size(); ++i) s << (i ? "," : "") << ids[i];
    return s.str();
}

std::string items_block(std::span<const QuestionnaireItem> items) {
    std::ostringstream s;
    for (const auto& it : items) s << "Q" << it.item_id << ". " << it.text << "\n";
    return s.str();
}

// One answer line: (item_id, choice, rationale). nullopt => not an answer line.
struct ParsedLine {
    int item_id;
    int choice;
    std::string rationale;
};

bool is_sep1(char c) { return c == '.' || c == ':' || c == ')' || c == ']'; }

std::optional<ParsedLine> parse_answer_line(const std::string& raw) {
    const std::string line = trim(raw);
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    };
    if (i < line.size() && (line[i] == 'Q' || line[i] == 'q')) ++i;
    std::size_t dig0 = i;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i == dig0) return std::nullopt;
    int item_id = static_cast<int>(*parse_int(line.substr(dig0, i - dig0)));
    if (i < line.size() && is_sep1(line[i])) ++i;
    skip_ws();
    if (starts_with_ci(line.substr(i), "answer")) i += 6;
    else if (starts_with_ci(line.substr(i), "choice")) i += 6;
    skip_ws();
    if (i < line.size() && (line[i] == ':' || line[i] == '-')) ++i;
    skip_ws();
    if (i >= line.size()) return std::nullopt;

    char v = line[i];
    bool next_is_alnum =
        i + 1 < line.size() && std::isalnum(static_cast<unsigned char>(line[i + 1]));
    int choice = 0;
    if (std::isdigit(static_cast<unsigned char>(v))) {
        if (next_is_alnum) return std::nullopt;  // multi-digit token, not a choice
        choice = v - '0';
        if (choice < 1 || choice > 5) throw ChoiceOutOfRangeError(item_id, std::string(1, v));
    } else {
        char u = static_cast<char>(std::toupper(static_cast<unsigned char>(v)));
        if (u < 'A' || u > 'E' || next_is_alnum) return std::nullopt;
        choice = u - 'A' + 1;
    }
    ++i;

    // Rationale: trailing text after optional punctuation / dash separators.
    skip_ws();
    while (i < line.size() &&
           (line[i] == '-' || line[i] == ':' || line[i] == '.' || line[i] == ',')) {
        ++i;
        skip_ws();
    }
    // UTF-8 em/en dash as separator.
    if (i + 2 < line.size() && static_cast<unsigned char>(line[i]) == 0xE2 &&
        static_cast<unsigned char>(line[i + 1]) == 0x80 &&
        (static_cast<unsigned char>(line[i + 2]) == 0x93 ||
         static_cast<unsigned char>(line[i + 2]) == 0x94)) {
        i += 3;
        skip_ws();
    }
    return ParsedLine{item_id, choice, trim(line.substr(i))};
}

}  // namespace

MissingItemsError::MissingItemsError(std::vector<int> ids)
    : SheetParseError("missing items: " + join_ids(ids)), missing(std::move(ids)) {}

DuplicateItemError::DuplicateItemError(int id)
    : SheetParseError("duplicate item " + std::to_string(id)), item_id(id) {}

ChoiceOutOfRangeError::ChoiceOutOfRangeError(int id, const std::string& token)
    : SheetParseError("item " + std::to_string(id) + ": choice '" + token + "' outside 1..5"),
      item_id(id) {}

std::array<std::vector<QuestionnaireItem>, 6> partition_sheets(const ItemBank& bank) {
    std::array<std::vector<QuestionnaireItem>, 6> sheets;
    for (int s = 0; s < 6; ++s) {
        sheets[s].reserve(20);
        for (int id = 20 * s + 1; id <= 20 * s + 20; ++id) sheets[s].push_back(bank.item(id));
    }
    return sheets;
}

ChatRequest build_sheet_prompt(const TemplateSet& templates, const PersonaProfile& profile,
                               std::span<const QuestionnaireItem> sheet_items, int sheet_index,
                               bool antialign, std::uint64_t assessment_seed,
                               bool strict_retry) {
    if (trim(profile.text).empty())
        throw ValidationError("empty persona: profile " + profile.id + " has no text");
    ChatRequest req;
    req.system_text = render_template(
        templates.assess_system,
        {{"persona", profile.text},
         {"antialign", antialign ? "\n" + trim(templates.antialign.text) : ""}});
    const auto& body = strict_retry ? templates.assess_sheet_strict : templates.assess_sheet;
    req.user_text = render_template(body, {{"count", std::to_string(sheet_items.size())},
                                           {"items", items_block(sheet_items)}});
    req.tag = "assess;key=" + latent_key_for(profile) +
              ";detail=" + to_string(profile.detail_level) +
              ";seed=" + std::to_string(assessment_seed) +
              ";sheet=" + std::to_string(sheet_index) + (strict_retry ? ";retry=1" : "");
    return req;
}

ChatRequest build_baseline_sheet_prompt(const TemplateSet& templates,
                                        std::span<const QuestionnaireItem> sheet_items,
                                        int sheet_index, std::uint64_t assessment_seed) {
    ChatRequest req;
    req.system_text = templates.assess_system_baseline.text;
    req.user_text =
        render_template(templates.assess_sheet, {{"count", std::to_string(sheet_items.size())},
                                                 {"items", items_block(sheet_items)}});
    req.tag = "assess;key=" + std::string(kBaselineLatentKey) +
              ";detail=standard;seed=" + std::to_string(assessment_seed) +
              ";sheet=" + std::to_string(sheet_index);
    return req;
}

AnswerSheet parse_sheet_response(const std::string& text,
                                 std::span<const QuestionnaireItem> sheet_items,
                                 int sheet_index) {
    std::set<int> expected;
    for (const auto& it : sheet_items) expected.insert(it.item_id);

    std::map<int, ParsedLine> found;
    for (const auto& line : split(text, '\n')) {
        auto parsed = parse_answer_line(line);
        if (!parsed) continue;
        if (!expected.count(parsed->item_id)) continue;  // stray id: ignore
        if (found.count(parsed->item_id)) throw DuplicateItemError(parsed->item_id);
        found.emplace(parsed->item_id, *parsed);
    }

    std::vector<int> missing;
    for (int id : expected)
        if (!found.count(id)) missing.push_back(id);
    if (!missing.empty()) throw MissingItemsError(std::move(missing));

    AnswerSheet sheet;
    sheet.sheet_index = sheet_index;
    for (const auto& [id, p] : found)
        sheet.responses.push_back(ItemResponse{id, p.choice, p.rationale});
    sheet.validate();
    return sheet;
}

ScoredAssessment score_responses(std::span<const ItemResponse> responses, const ItemBank& bank) {
    if (responses.size() != bank.size())
        throw ValidationError("incomplete responses: got " + std::to_string(responses.size()) +
                              ", need " + std::to_string(bank.size()));
    std::array<bool, 120> seen{};
    ScoredAssessment out;
    for (const auto& r : responses) {
        const auto& item = bank.item(r.item_id);
        if (seen[r.item_id - 1])
            throw ValidationError("duplicate response for item " + std::to_string(r.item_id));
        seen[r.item_id - 1] = true;
        if (r.choice < 1 || r.choice > 5)
            throw ValidationError("item " + std::to_string(r.item_id) + ": choice outside 1..5");
        int item_score = item.keying == Keying::plus ? r.choice : 6 - r.choice;
        out.facets[static_cast<int>(item.domain) * 6 + item.facet_index - 1] += item_score;
    }
    out.raw.scale = ScoreScale::raw;
    out.rescaled.scale = ScoreScale::rescaled;
    for (Domain d : kDomains) {
        double sum = 0;
        for (int f = 0; f < 6; ++f) sum += out.facets[static_cast<int>(d) * 6 + f];
        out.raw[d] = sum;
        out.rescaled[d] = rescale(sum);
    }
    return out;
}

namespace {

AssessmentOutcome run_sheets(Gateway& gateway, const TemplateSet& templates,
                             const ItemBank& bank, const PersonaProfile* profile,
                             bool antialign, const std::string& assessment_id,
                             std::uint64_t assessment_seed) {
    AssessmentOutcome out;
    out.assessment_id = assessment_id;
    out.persona_id = profile ? profile->id : "";
    auto sheets = partition_sheets(bank);
    for (int s = 0; s < 6; ++s) {
        SheetExchange ex;
        ex.sheet_index = s;
        bool parsed = false;
        for (int attempt = 0; attempt < 2 && !parsed; ++attempt) {
            ChatRequest req =
                profile ? build_sheet_prompt(templates, *profile, sheets[s], s, antialign,
                                             assessment_seed, attempt > 0)
                        : build_baseline_sheet_prompt(templates, sheets[s], s, assessment_seed);
            ChatResponse res;
            try {
                res = gateway.complete(req);
            } catch (const ProviderError& e) {
                out.ok = false;
                out.failed_sheet = s;
                out.failure = std::string("provider: ") + e.what();
                return out;
            }
            ex.raw_text = res.text;
            ex.attempts = attempt + 1;
            try {
                ex.sheet = parse_sheet_response(res.text, sheets[s], s);
                parsed = true;
            } catch (const SheetParseError& e) {
                if (attempt == 1) {
                    out.ok = false;
                    out.failed_sheet = s;
                    out.failure = std::string("parse: ") + e.what();
                    return out;
                }
            }
        }
        ex.sheet.assessment_id = assessment_id;
        ex.sheet.persona_id = out.persona_id;
        out.sheets.push_back(std::move(ex));
    }
    for (const auto& ex : out.sheets)
        for (const auto& r : ex.sheet.responses) out.responses.push_back(r);
    std::sort(out.responses.begin(), out.responses.end(),
              [](const ItemResponse& a, const ItemResponse& b) { return a.item_id < b.item_id; });
    out.scores = score_responses(out.responses, bank);
    out.ok = true;
    return out;
}

}  // namespace

AssessmentOutcome run_assessment(Gateway& gateway, const TemplateSet& templates,
                                 const ItemBank& bank, const PersonaProfile& profile,
                                 bool antialign, const std::string& assessment_id,
                                 std::uint64_t assessment_seed) {
    return run_sheets(gateway, templates, bank, &profile, antialign, assessment_id,
                      assessment_seed);
}

AssessmentOutcome run_baseline_assessment(Gateway& gateway, const TemplateSet& templates,
                                          const ItemBank& bank,
                                          const std::string& assessment_id,
                                          std::uint64_t assessment_seed) {
    return run_sheets(gateway, templates, bank, nullptr, false, assessment_id, assessment_seed);
}

}  // namespace persim
