#include "persim/item_bank.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "persim/util.hpp"

namespace persim {

ItemBank ItemBank::validate(std::vector<QuestionnaireItem> items) {
    if (items.size() != 120)
        throw ValidationError("item bank: expected 120 items, got " +
                              std::to_string(items.size()) +
                              (items.size() < 120 ? " (missing item)" : ""));
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.item_id < b.item_id; });
    std::map<std::pair<char, int>, int> per_facet;
    std::array<int, 5> per_domain{};
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& it = items[i];
        if (it.item_id != static_cast<int>(i) + 1) {
            if (i > 0 && items[i - 1].item_id == it.item_id)
                throw ValidationError("item bank: duplicate item_id " + std::to_string(it.item_id));
            throw ValidationError("item bank: missing item " + std::to_string(i + 1));
        }
        if (it.facet_index < 1 || it.facet_index > 6)
            throw ValidationError("item " + std::to_string(it.item_id) + ": facet_index " +
                                  std::to_string(it.facet_index) + " outside 1..6");
        per_facet[{domain_code(it.domain), it.facet_index}]++;
        per_domain[static_cast<int>(it.domain)]++;
    }
    for (Domain d : kDomains) {
        if (per_domain[static_cast<int>(d)] != 24)
            throw ValidationError(std::string("item bank: domain ") + domain_code(d) +
                                  " has " + std::to_string(per_domain[static_cast<int>(d)]) +
                                  " items, expected 24");
        for (int f = 1; f <= 6; ++f) {
            int n = per_facet[{domain_code(d), f}];
            if (n != 4)
                throw ValidationError(std::string("item bank: facet ") + domain_code(d) +
                                      std::to_string(f) + " has " + std::to_string(n) +
                                      " items, expected 4");
        }
    }
    ItemBank bank;
    bank.items_ = std::move(items);
    return bank;
}

const QuestionnaireItem& ItemBank::item(int item_id) const {
    if (item_id < 1 || item_id > static_cast<int>(items_.size()))
        throw ValidationError("item_id " + std::to_string(item_id) + " out of range");
    return items_[static_cast<std::size_t>(item_id - 1)];
}

ItemBank load_item_bank(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open item bank: " + path);
    std::vector<QuestionnaireItem> items;
    std::string line;
    while (std::getline(f, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto cols = split(line, '\t');
        if (cols.size() < 5) throw DataError("item bank: malformed line: " + line);
        if (cols[0] == "item_id") continue;  // header
        QuestionnaireItem it;
        auto id = parse_int(cols[0]);
        if (!id) throw DataError("item bank: bad item_id: " + cols[0]);
        it.item_id = static_cast<int>(*id);
        std::string dom = trim(cols[1]);
        if (dom.size() != 1) throw DataError("item bank: bad domain: " + dom);
        it.domain = domain_from_code(dom[0]);
        auto facet = parse_int(cols[2]);
        if (!facet) throw DataError("item bank: bad facet_index: " + cols[2]);
        it.facet_index = static_cast<int>(*facet);
        std::string key = trim(cols[3]);
        if (key == "plus") it.keying = Keying::plus;
        else if (key == "minus") it.keying = Keying::minus;
        else throw DataError("item bank: bad keying: " + key);
        it.text = trim(cols[4]);
        items.push_back(std::move(it));
    }
    return ItemBank::validate(std::move(items));
}

}  // namespace persim
