#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace persim {

// Error categories; the CLI maps these onto distinct exit codes.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The five trait domains in OCEAN reporting order is (O,C,E,A,N); the
// instrument cycles N,E,O,A,C. kDomains keeps instrument order.
enum class Domain : int { N = 0, E = 1, O = 2, A = 3, C = 4 };
inline constexpr std::array<Domain, 5> kDomains{Domain::N, Domain::E, Domain::O, Domain::A,
                                                Domain::C};
char domain_code(Domain d);
Domain domain_from_code(char c);
const char* domain_name(Domain d);

enum class Keying { plus, minus };

enum class Strategy { standard, antialign, narrative, literary, poor };
enum class DetailLevel { poor, standard };
enum class ProfileSource { synthesized, external };

const char* to_string(Strategy s);
const char* to_string(DetailLevel d);
const char* to_string(ProfileSource s);
Strategy strategy_from_string(const std::string& s);
DetailLevel detail_from_string(const std::string& s);
ProfileSource source_from_string(const std::string& s);

struct PersonaSkeleton {
    std::string id;
    int age = 0;
    std::string gender;
    std::string race;
    std::string education;
    std::string occupation;
    std::string workclass;
    std::string country;
    std::string income_bracket;
    long long capital_gain = 0;
    long long capital_loss = 0;

    void validate() const;  // throws ValidationError on out-of-range age etc.
};

struct PersonaProfile {
    std::string id;
    std::optional<std::string> skeleton_id;
    std::string text;
    Strategy strategy = Strategy::standard;
    DetailLevel detail_level = DetailLevel::standard;
    ProfileSource source = ProfileSource::synthesized;
    std::size_t word_cnt = 0;
    std::string template_hash;  // provenance of the generating prompt template
    bool substandard = false;   // narrative under the word floor after retry
    // External personas carry their own age (no skeleton to join against);
    // needed to place them on population age curves.
    std::optional<int> age;

    void validate() const;
};

struct QuestionnaireItem {
    int item_id = 0;  // 1..120
    std::string text;
    Domain domain = Domain::N;
    int facet_index = 0;  // 1..6 within the domain
    Keying keying = Keying::plus;
};

struct ItemResponse {
    int item_id = 0;
    int choice = 0;  // Likert 1..5
    std::string rationale;
};

struct AnswerSheet {
    std::string assessment_id;
    std::string persona_id;
    int sheet_index = 0;  // 0..5; covers items [20*i+1 .. 20*i+20]
    std::vector<ItemResponse> responses;

    void validate() const;
};

enum class ScoreScale { raw, rescaled, percentile };

struct TraitVector {
    // Stored in instrument order N,E,O,A,C; accessors by Domain.
    std::array<double, 5> values{};
    ScoreScale scale = ScoreScale::rescaled;

    double& operator[](Domain d) { return values[static_cast<int>(d)]; }
    double operator[](Domain d) const { return values[static_cast<int>(d)]; }
};

struct AssessmentRecord {
    std::string assessment_id;
    std::string persona_id;
    std::string run_id;
    TraitVector raw;                    // domain raw scores 24..120
    TraitVector rescaled;               // 0..100
    std::array<double, 30> facets{};    // raw facet scores, [domain*6 + facet-1]
    std::string created_at;
};

struct PersonalityCurve {
    Domain trait = Domain::N;
    std::vector<double> bin_edges;   // ascending; bins are [lo, hi)
    std::vector<double> values;      // mean score per bin; meaningful iff counts > 0
    std::vector<std::size_t> counts;

    std::size_t bin_count() const { return counts.size(); }
    bool defined(std::size_t bin) const { return counts[bin] > 0; }
    void validate() const;
};

// (score - 24) / 96 * 100; strictly monotone bijection [24,120] -> [0,100].
double rescale(double raw_domain_score);
double rescale_inverse(double rescaled_score);

}  // namespace persim
