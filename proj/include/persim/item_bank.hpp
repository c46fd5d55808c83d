#pragma once

#include <string>
#include <vector>

#include "persim/types.hpp"

namespace persim {

// Validated IPIP-NEO-120 item bank: exactly 120 items, 24 per domain,
// 4 per (domain, facet) cell, unique contiguous ids 1..120.
class ItemBank {
public:
    static ItemBank validate(std::vector<QuestionnaireItem> items);

    const std::vector<QuestionnaireItem>& items() const { return items_; }
    const QuestionnaireItem& item(int item_id) const;  // 1..120
    std::size_t size() const { return items_.size(); }

private:
    ItemBank() = default;
    std::vector<QuestionnaireItem> items_;  // index = item_id - 1
};

// TSV with columns item_id, domain, facet_index, keying, text; '#' comments
// and one header row allowed. See docs/file_formats.md.
ItemBank load_item_bank(const std::string& path);

}  // namespace persim
