#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "persim/types.hpp"

namespace persim {

// Census microdata table in the Adult Income Dataset layout.
struct CensusTable {
    std::vector<PersonaSkeleton> rows;
    std::map<std::string, std::set<std::string>> vocab;  // categorical column -> values seen
    std::size_t dropped_rows = 0;                        // unparseable mandatory fields

    bool in_vocab(const std::string& column, const std::string& value) const;
};

// Column predicates; all must hold (conjunction). Equality for categorical
// columns, inclusive ranges for integer columns.
struct SamplingFilter {
    struct Clause {
        std::string column;
        // Exactly one of the two forms is set.
        std::optional<std::string> equals;
        std::optional<std::pair<long long, long long>> range;
    };
    std::vector<Clause> clauses;

    bool matches(const PersonaSkeleton& s) const;
    bool empty() const { return clauses.empty(); }

    // "gender=Female,age=25..40" -> clauses; throws ValidationError on
    // unknown columns or malformed ranges.
    static SamplingFilter parse(const std::string& text);
};

CensusTable load_census(const std::string& path);

struct SampleOptions {
    std::uint64_t seed = 0;
    // Uniform +/- jitter applied to age after row draw, clipped to [15,100];
    // 0 disables (pure whole-row sampling).
    int age_jitter = 0;
};

// n rows drawn uniformly with replacement from the (filtered) table.
// Deterministic under (table, n, filter, seed). Throws DataError when the
// filter matches nothing.
std::vector<PersonaSkeleton> sample_skeletons(const CensusTable& table, std::size_t n,
                                              const SamplingFilter& filter,
                                              const SampleOptions& opts);

// Column accessor used by the filter and by marginal-frequency checks.
std::string skeleton_column(const PersonaSkeleton& s, const std::string& column);

}  // namespace persim
