#pragma once

#include <array>
#include <string>

#include "persim/types.hpp"

namespace persim {

// Published human reference curves; all five traits share one binning.
struct HumanBaseline {
    std::array<PersonalityCurve, 5> curves;  // indexed by Domain

    const PersonalityCurve& curve(Domain d) const { return curves[static_cast<int>(d)]; }
    const std::vector<double>& bin_edges() const { return curves[0].bin_edges; }
};

// CSV rows (trait, bin_lo, bin_hi, mean_value); '#' comments and a header
// row allowed. Throws DataError on a missing trait or misaligned bins.
HumanBaseline load_baseline(const std::string& path);

}  // namespace persim
