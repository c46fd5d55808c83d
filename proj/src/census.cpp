#include "persim/census.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "persim/util.hpp"

namespace persim {

namespace {

const std::set<std::string> kCategoricalColumns = {
    "gender", "race", "education", "occupation", "workclass", "country", "income_bracket"};
const std::set<std::string> kIntColumns = {"age", "capital_gain", "capital_loss"};

}  // namespace

bool CensusTable::in_vocab(const std::string& column, const std::string& value) const {
    auto it = vocab.find(column);
    return it != vocab.end() && it->second.count(value) > 0;
}

std::string skeleton_column(const PersonaSkeleton& s, const std::string& column) {
    if (column == "age") return std::to_string(s.age);
    if (column == "gender") return s.gender;
    if (column == "race") return s.race;
    if (column == "education") return s.education;
    if (column == "occupation") return s.occupation;
    if (column == "workclass") return s.workclass;
    if (column == "country") return s.country;
    if (column == "income_bracket") return s.income_bracket;
    if (column == "capital_gain") return std::to_string(s.capital_gain);
    if (column == "capital_loss") return std::to_string(s.capital_loss);
    throw ValidationError("unknown skeleton column: " + column);
}

bool SamplingFilter::matches(const PersonaSkeleton& s) const {
    for (const auto& c : clauses) {
        if (c.equals) {
            if (skeleton_column(s, c.column) != *c.equals) return false;
        } else if (c.range) {
            auto v = parse_int(skeleton_column(s, c.column));
            if (!v || *v < c.range->first || *v > c.range->second) return false;
        }
    }
    return true;
}

SamplingFilter SamplingFilter::parse(const std::string& text) {
    SamplingFilter f;
    if (trim(text).empty()) return f;
    for (const auto& part : split(text, ',')) {
        auto eq = part.find('=');
        if (eq == std::string::npos)
            throw ValidationError("filter clause missing '=': " + part);
        Clause c;
        c.column = trim(part.substr(0, eq));
        if (kCategoricalColumns.count(c.column) == 0 && kIntColumns.count(c.column) == 0)
            throw ValidationError("filter references unknown column: " + c.column);
        std::string val = trim(part.substr(eq + 1));
        auto dots = val.find("..");
        if (dots != std::string::npos) {
            if (kIntColumns.count(c.column) == 0)
                throw ValidationError("range filter on non-integer column: " + c.column);
            auto lo = parse_int(val.substr(0, dots));
            auto hi = parse_int(val.substr(dots + 2));
            if (!lo || !hi || *lo > *hi)
                throw ValidationError("malformed range in filter: " + val);
            c.range = {*lo, *hi};
        } else {
            c.equals = val;
        }
        f.clauses.push_back(std::move(c));
    }
    return f;
}

CensusTable load_census(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open census file: " + path);
    CensusTable table;
    std::string line;
    std::size_t row_no = 0;
    while (std::getline(f, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        ++row_no;
        auto cols = split(line, ',');
        // Standard Adult layout: age, workclass, fnlwgt, education, education-num,
        // marital-status, occupation, relationship, race, sex, capital-gain,
        // capital-loss, hours-per-week, native-country, income
        if (cols.size() != 15) {
            ++table.dropped_rows;
            continue;
        }
        for (auto& c : cols) c = trim(c);
        auto age = parse_int(cols[0]);
        if (!age || *age < 15 || *age > 100 || cols[9].empty()) {
            ++table.dropped_rows;
            continue;
        }
        PersonaSkeleton s;
        s.id = "row-" + std::to_string(row_no);
        s.age = static_cast<int>(*age);
        s.workclass = cols[1];
        s.education = cols[3];
        s.occupation = cols[6];
        s.race = cols[8];
        s.gender = cols[9];
        s.capital_gain = parse_int(cols[10]).value_or(0);
        s.capital_loss = parse_int(cols[11]).value_or(0);
        s.country = cols[13];
        s.income_bracket = cols[14];
        for (const auto& col : kCategoricalColumns)
            table.vocab[col].insert(skeleton_column(s, col));
        table.rows.push_back(std::move(s));
    }
    if (table.rows.empty()) throw DataError("census file has no usable rows: " + path);
    return table;
}

std::vector<PersonaSkeleton> sample_skeletons(const CensusTable& table, std::size_t n,
                                              const SamplingFilter& filter,
                                              const SampleOptions& opts) {
    if (n == 0) throw ValidationError("sample size must be >= 1");
    std::vector<std::size_t> pool;
    pool.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        if (filter.matches(table.rows[i])) pool.push_back(i);
    if (pool.empty()) throw DataError("sampling filter matches no rows");

    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::vector<PersonaSkeleton> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        PersonaSkeleton s = table.rows[pool[pick(rng)]];
        if (opts.age_jitter > 0) {
            std::uniform_int_distribution<int> jit(-opts.age_jitter, opts.age_jitter);
            s.age = std::clamp(s.age + jit(rng), 15, 100);
        }
        char buf[16];
        std::snprintf(buf, sizeof(buf), "sk-%06zu", i + 1);
        s.id = buf;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace persim
