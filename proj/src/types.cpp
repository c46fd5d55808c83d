#include "persim/types.hpp"

#include <algorithm>
#include <cmath>

namespace persim {

char domain_code(Domain d) {
    static constexpr std::array<char, 5> codes{'N', 'E', 'O', 'A', 'C'};
    return codes[static_cast<int>(d)];
}

Domain domain_from_code(char c) {
    switch (c) {
        case 'N': return Domain::N;
        case 'E': return Domain::E;
        case 'O': return Domain::O;
        case 'A': return Domain::A;
        case 'C': return Domain::C;
        default: throw ValidationError(std::string("unknown domain code: ") + c);
    }
}

const char* domain_name(Domain d) {
    switch (d) {
        case Domain::N: return "Neuroticism";
        case Domain::E: return "Extraversion";
        case Domain::O: return "Openness";
        case Domain::A: return "Agreeableness";
        case Domain::C: return "Conscientiousness";
    }
    return "?";
}

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::standard: return "standard";
        case Strategy::antialign: return "antialign";
        case Strategy::narrative: return "narrative";
        case Strategy::literary: return "literary";
        case Strategy::poor: return "poor";
    }
    return "?";
}

const char* to_string(DetailLevel d) {
    return d == DetailLevel::poor ? "poor" : "standard";
}

const char* to_string(ProfileSource s) {
    return s == ProfileSource::synthesized ? "synthesized" : "external";
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "standard") return Strategy::standard;
    if (s == "antialign") return Strategy::antialign;
    if (s == "narrative") return Strategy::narrative;
    if (s == "literary") return Strategy::literary;
    if (s == "poor") return Strategy::poor;
    throw ValidationError("unknown strategy: " + s);
}

DetailLevel detail_from_string(const std::string& s) {
    if (s == "poor") return DetailLevel::poor;
    if (s == "standard") return DetailLevel::standard;
    throw ValidationError("unknown detail level: " + s);
}

ProfileSource source_from_string(const std::string& s) {
    if (s == "synthesized") return ProfileSource::synthesized;
    if (s == "external") return ProfileSource::external;
    throw ValidationError("unknown profile source: " + s);
}

void PersonaSkeleton::validate() const {
    if (id.empty()) throw ValidationError("skeleton id empty");
    if (age < 15 || age > 100)
        throw ValidationError("skeleton " + id + ": age " + std::to_string(age) +
                              " outside [15,100]");
    if (gender.empty()) throw ValidationError("skeleton " + id + ": gender missing");
}

void PersonaProfile::validate() const {
    if (id.empty()) throw ValidationError("profile id empty");
    if (strategy == Strategy::narrative && !substandard && word_cnt < 2000)
        throw ValidationError("profile " + id + ": narrative profile under 2000 words");
    if (strategy == Strategy::literary) {
        if (source != ProfileSource::external)
            throw ValidationError("profile " + id + ": literary profile must be external");
        if (skeleton_id.has_value())
            throw ValidationError("profile " + id + ": literary profile cannot reference a skeleton");
    }
    if (strategy == Strategy::poor && detail_level != DetailLevel::poor)
        throw ValidationError("profile " + id + ": poor strategy requires poor detail level");
}

void AnswerSheet::validate() const {
    if (sheet_index < 0 || sheet_index > 5)
        throw ValidationError("sheet index " + std::to_string(sheet_index) + " outside 0..5");
    if (responses.size() != 20)
        throw ValidationError("sheet " + std::to_string(sheet_index) + ": expected 20 responses, got " +
                              std::to_string(responses.size()));
    const int lo = 20 * sheet_index + 1;
    std::array<bool, 20> seen{};
    for (const auto& r : responses) {
        if (r.item_id < lo || r.item_id >= lo + 20)
            throw ValidationError("sheet " + std::to_string(sheet_index) + ": item " +
                                  std::to_string(r.item_id) + " outside its range");
        if (seen[r.item_id - lo])
            throw ValidationError("sheet " + std::to_string(sheet_index) + ": duplicate item " +
                                  std::to_string(r.item_id));
        seen[r.item_id - lo] = true;
        if (r.choice < 1 || r.choice > 5)
            throw ValidationError("item " + std::to_string(r.item_id) + ": choice " +
                                  std::to_string(r.choice) + " outside 1..5");
    }
}

void PersonalityCurve::validate() const {
    if (bin_edges.size() < 2) throw ValidationError("curve needs at least one bin");
    if (!std::is_sorted(bin_edges.begin(), bin_edges.end()) ||
        std::adjacent_find(bin_edges.begin(), bin_edges.end()) != bin_edges.end())
        throw ValidationError("curve bin edges must be strictly ascending");
    if (values.size() != bin_edges.size() - 1 || counts.size() != values.size())
        throw ValidationError("curve values/counts length mismatch");
}

double rescale(double raw_domain_score) {
    if (raw_domain_score < 24.0 || raw_domain_score > 120.0)
        throw ValidationError("raw domain score " + std::to_string(raw_domain_score) +
                              " outside [24,120]");
    return (raw_domain_score - 24.0) / 96.0 * 100.0;
}

double rescale_inverse(double rescaled_score) {
    if (rescaled_score < 0.0 || rescaled_score > 100.0)
        throw ValidationError("rescaled score " + std::to_string(rescaled_score) +
                              " outside [0,100]");
    return rescaled_score / 100.0 * 96.0 + 24.0;
}

}  // namespace persim
