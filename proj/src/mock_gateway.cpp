#include "persim/mock_gateway.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "persim/util.hpp"

namespace persim {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller; avoids the implementation-defined std::normal_distribution
// sequence so mock runs replay identically across standard libraries.
double normal01(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    while (u1 <= 1e-300) u1 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

const char* rationale_for(int choice) {
    switch (choice) {
        case 1: return "that is not me at all";
        case 2: return "mostly not like me";
        case 3: return "hard to say either way";
        case 4: return "that sounds like me";
        default: return "that is exactly me";
    }
}

std::map<std::string, std::string> parse_tag(const std::string& tag) {
    std::map<std::string, std::string> kv;
    for (const auto& part : split(tag, ';')) {
        auto eq = part.find('=');
        if (eq == std::string::npos) continue;
        kv[part.substr(0, eq)] = part.substr(eq + 1);
    }
    return kv;
}

// Within-domain ordinal (0..23) of an item under the canonical IPIP-NEO-120
// interleave; lets a single sheet place its items on the domain's ladder.
int domain_ordinal(const QuestionnaireItem& it) {
    int pass = (it.item_id - 1) / 30;
    int r = (it.item_id - 1) % 30;
    int facet = r / 5 + 1;
    if (facet == it.facet_index && kDomains[r % 5] == it.domain)
        return pass * 6 + facet - 1;
    // Non-canonical bank: fall back to a hash position. Sums no longer cancel
    // exactly but output stays deterministic and in range.
    return static_cast<int>(mix64(static_cast<std::uint64_t>(it.item_id)) % 24);
}

}  // namespace

double MockPersonaModel::sigma() const {
    auto it = noise_sd_by_detail.find(active_detail);
    if (it == noise_sd_by_detail.end())
        throw ConfigError("mock model: no sigma configured for detail level");
    return it->second;
}

void MockPersonaModel::validate() const {
    auto p = noise_sd_by_detail.find(DetailLevel::poor);
    auto s = noise_sd_by_detail.find(DetailLevel::standard);
    if (p != noise_sd_by_detail.end() && s != noise_sd_by_detail.end() &&
        p->second <= s->second)
        throw ConfigError("mock model: sigma(poor) must exceed sigma(standard)");
}

std::string mock_answer_sheet(const MockPersonaModel& model,
                              std::span<const QuestionnaireItem> sheet_items,
                              std::uint64_t assessment_seed) {
    const double sigma = model.sigma();

    // One latent draw per assessment per domain, shared by all six sheets.
    std::array<double, 5> theta{};
    for (Domain d : kDomains) {
        std::mt19937_64 rng(combine_seed(combine_seed(assessment_seed, "theta"),
                                         static_cast<std::uint64_t>(d)));
        theta[static_cast<int>(d)] = model.latent_mean[d] + sigma * normal01(rng);
    }

    // Stratified ladder of 24 offsets per domain, permuted per assessment.
    std::array<std::array<int, 24>, 5> perm{};
    for (Domain d : kDomains) {
        auto& p = perm[static_cast<int>(d)];
        std::iota(p.begin(), p.end(), 0);
        std::mt19937_64 rng(combine_seed(combine_seed(assessment_seed, "ladder"),
                                         static_cast<std::uint64_t>(d)));
        std::shuffle(p.begin(), p.end(), rng);
    }

    std::ostringstream out;
    for (const auto& it : sheet_items) {
        int di = static_cast<int>(it.domain);
        double target_scale = 1.0 + theta[di] / 25.0;  // rescaled -> 1..5 item scale
        int slot = perm[di][domain_ordinal(it)];
        double offset = (2.0 * slot + 1.0) / 48.0 - 0.5;
        long t = std::lround(target_scale + offset);
        int item_target = static_cast<int>(std::clamp<long>(t, 1, 5));
        int choice = it.keying == Keying::plus ? item_target : 6 - item_target;
        out << "Q" << it.item_id << ": " << choice << " - " << rationale_for(item_target)
            << "\n";
    }
    return out.str();
}

MockGateway::MockGateway(MockGatewayConfig config, const ItemBank& bank)
    : config_(std::move(config)), bank_(bank) {
    if (config_.sigma_poor <= config_.sigma_standard)
        throw ConfigError("mock gateway: sigma_poor must exceed sigma_standard");
}

TraitVector MockGateway::latent_for_key(const std::string& key) const {
    if (auto it = config_.latent_overrides.find(key); it != config_.latent_overrides.end())
        return it->second;
    TraitVector v;
    v.scale = ScoreScale::rescaled;
    if (key == kBaselineLatentKey) {
        for (Domain d : kDomains)
            v[d] = rescale(config_.baseline_latent_raw[static_cast<int>(d)]);
        return v;
    }
    // Hash-derived integer raw score per domain inside the configured band.
    int lo = config_.latent_band_lo_raw, hi = config_.latent_band_hi_raw;
    int width = std::max(1, hi - lo + 1);
    for (Domain d : kDomains) {
        std::uint64_t h = combine_seed(combine_seed(config_.seed, key),
                                       static_cast<std::uint64_t>(d) + 101);
        v[d] = rescale(lo + static_cast<int>(h % static_cast<std::uint64_t>(width)));
    }
    return v;
}

ChatResponse MockGateway::complete(const ChatRequest& request) {
    request.validate();
    auto kv = parse_tag(request.tag);
    const std::string kind = kv.count("") ? "" : (request.tag.substr(0, request.tag.find(';')));

    ChatResponse res;
    res.provider = name();
    res.latency_ms = 0;
    res.attempt = 1;

    if (starts_with_ci(kind, "assess")) {
        MockPersonaModel model;
        model.latent_mean = latent_for_key(kv.count("key") ? kv["key"] : "anonymous");
        model.noise_sd_by_detail = {{DetailLevel::poor, config_.sigma_poor},
                                    {DetailLevel::standard, config_.sigma_standard}};
        model.active_detail =
            kv.count("detail") ? detail_from_string(kv["detail"]) : DetailLevel::standard;
        model.seed = config_.seed;
        std::uint64_t seed = kv.count("seed")
                                 ? static_cast<std::uint64_t>(std::stoull(kv["seed"]))
                                 : config_.seed;

        // Answer exactly the items asked in the prompt ("Q<id>. <text>" lines).
        std::vector<QuestionnaireItem> items;
        for (const auto& line : split(request.user_text, '\n')) {
            std::string t = trim(line);
            if (t.size() < 3 || t[0] != 'Q' || !std::isdigit(static_cast<unsigned char>(t[1])))
                continue;
            std::size_t pos = 1;
            while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
            if (pos >= t.size() || t[pos] != '.') continue;
            auto id = parse_int(t.substr(1, pos - 1));
            if (id && *id >= 1 && *id <= static_cast<long long>(bank_.size()))
                items.push_back(bank_.item(static_cast<int>(*id)));
        }
        res.text = mock_answer_sheet(model, items, seed);
        return res;
    }

    if (starts_with_ci(kind, "forge")) {
        std::string strategy = kv.count("strategy") ? kv["strategy"] : "standard";
        std::uint64_t seed = kv.count("seed")
                                 ? static_cast<std::uint64_t>(std::stoull(kv["seed"]))
                                 : config_.seed;
        std::size_t target = strategy == "narrative" ? config_.narrative_profile_words
                                                     : config_.standard_profile_words;
        if (kv.count("words")) target = std::stoull(kv["words"]);

        // Echo the demographic fact lines from the prompt, then pad with
        // deterministic filler prose until the word target is met.
        std::ostringstream text;
        text << "You are the person described by these facts.\n";
        for (const auto& line : split(request.user_text, '\n')) {
            std::string t = trim(line);
            if (t.rfind("- ", 0) == 0) text << t << "\n";
        }
        static const char* lexicon[] = {
            "morning", "routine", "quiet",  "neighborhood", "coffee",  "walks",   "evening",
            "books",   "radio",   "garden", "market",       "friends", "family",  "stories",
            "weekend", "small",   "plans",  "habits",       "steady",  "curious", "letters",
            "kitchen", "street",  "work",   "seasons",      "music",   "dinner",  "travel"};
        std::mt19937_64 rng(combine_seed(seed, fnv1a64(request.user_text)));
        std::size_t words = word_count(text.str());
        std::size_t in_sentence = 0;
        while (words < target) {
            if (in_sentence == 0) text << "Your days hold";
            text << ' ' << lexicon[rng() % std::size(lexicon)];
            ++words;
            if (++in_sentence >= 9) {
                text << '.' << '\n';
                in_sentence = 0;
            }
        }
        if (in_sentence > 0) text << ".\n";
        res.text = text.str();
        return res;
    }

    // Generic deterministic echo.
    res.text = "mock-reply:" +
               hex64(combine_seed(config_.seed,
                                  fnv1a64(request.system_text + "\x1f" + request.user_text)));
    return res;
}

std::string latent_key_for(const PersonaProfile& profile) {
    if (profile.skeleton_id) return "sk:" + *profile.skeleton_id;
    return "text:" + hex64(fnv1a64(profile.text));
}

}  // namespace persim
