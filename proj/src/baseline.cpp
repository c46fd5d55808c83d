#include "persim/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "persim/util.hpp"

namespace persim {

HumanBaseline load_baseline(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open baseline file: " + path);
    struct Row {
        double lo, hi, mean;
    };
    std::map<char, std::vector<Row>> per_trait;
    std::string line;
    while (std::getline(f, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto cols = split(t, ',');
        if (cols.size() != 4) throw DataError("baseline: malformed line: " + line);
        if (trim(cols[0]) == "trait") continue;  // header
        std::string trait = trim(cols[0]);
        auto lo = parse_double(cols[1]);
        auto hi = parse_double(cols[2]);
        auto mean = parse_double(cols[3]);
        if (trait.size() != 1 || !lo || !hi || !mean)
            throw DataError("baseline: malformed line: " + line);
        domain_from_code(trait[0]);  // validates the code
        per_trait[trait[0]].push_back({*lo, *hi, *mean});
    }
    HumanBaseline base;
    std::vector<double> reference_edges;
    for (Domain d : kDomains) {
        char code = domain_code(d);
        auto it = per_trait.find(code);
        if (it == per_trait.end())
            throw DataError(std::string("baseline: missing trait ") + code);
        auto rows = it->second;
        std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.lo < b.lo; });
        PersonalityCurve curve;
        curve.trait = d;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i > 0 && std::abs(rows[i].lo - rows[i - 1].hi) > 1e-9)
                throw DataError(std::string("baseline: trait ") + code +
                                " has non-contiguous bins");
            curve.bin_edges.push_back(rows[i].lo);
            curve.values.push_back(rows[i].mean);
            curve.counts.push_back(1);  // reference values are always defined
        }
        curve.bin_edges.push_back(rows.back().hi);
        curve.validate();
        if (reference_edges.empty()) {
            reference_edges = curve.bin_edges;
        } else if (curve.bin_edges != reference_edges) {
            throw DataError(std::string("baseline: trait ") + code +
                            " bins misaligned with other traits");
        }
        base.curves[static_cast<int>(d)] = std::move(curve);
    }
    return base;
}

}  // namespace persim
