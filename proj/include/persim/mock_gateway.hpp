#pragma once

#include <map>
#include <span>
#include <string>

#include "persim/gateway.hpp"
#include "persim/item_bank.hpp"
#include "persim/types.hpp"

namespace persim {

// Latent-trait model standing in for one persona during offline runs.
// latent_mean is on the rescaled 0..100 scale; noise_sd_by_detail gives the
// per-assessment Gaussian sigma (rescaled units) for each detail level.
struct MockPersonaModel {
    TraitVector latent_mean;
    std::map<DetailLevel, double> noise_sd_by_detail;
    DetailLevel active_detail = DetailLevel::standard;
    std::uint64_t seed = 0;

    double sigma() const;
    void validate() const;  // sigma(poor) > sigma(standard)
};

// Answers one 20-item sheet in the grammar the assessment parser accepts.
// Per assessment (not per sheet) one latent draw theta' = latent + N(0, sigma)
// per domain; each item's target is round(theta' on the 1..5 item scale plus
// a stratified +/-0.5 offset drawn without replacement from the domain's
// 24-slot ladder), clamped to [1,5]; minus-keyed items emit 6 - target.
// Pure function: identical output for identical (model, items, seed).
std::string mock_answer_sheet(const MockPersonaModel& model,
                              std::span<const QuestionnaireItem> sheet_items,
                              std::uint64_t assessment_seed);

struct MockGatewayConfig {
    std::uint64_t seed = 0;
    double sigma_standard = 2.0;
    double sigma_poor = 4.0;  // must stay above sigma_standard
    // Hash-derived latents are drawn as integer raw scores in this band.
    int latent_band_lo_raw = 60;
    int latent_band_hi_raw = 100;
    // Intrinsic trait posture used for empty-persona baseline runs,
    // as raw integer scores in instrument order N,E,O,A,C.
    std::array<int, 5> baseline_latent_raw{53, 77, 82, 91, 87};
    // Pinned latents (rescaled) by latent key; used by experiments that
    // need exact gaps between personas.
    std::map<std::string, TraitVector> latent_overrides;
    std::size_t standard_profile_words = 320;
    std::size_t narrative_profile_words = 2200;
};

// Offline provider. Interprets the request tag:
//   assess;key=<latent-key>;detail=<poor|standard>;seed=<u64>
//   forge;strategy=<standard|narrative>;seed=<u64>
// and answers anything else with a deterministic echo.
class MockGateway : public Gateway {
public:
    MockGateway(MockGatewayConfig config, const ItemBank& bank);

    ChatResponse complete(const ChatRequest& request) override;
    std::string name() const override { return "mock"; }

    TraitVector latent_for_key(const std::string& key) const;
    const MockGatewayConfig& config() const { return config_; }

private:
    MockGatewayConfig config_;
    const ItemBank& bank_;
};

// Reserved latent key for the empty-persona baseline protocol.
inline constexpr const char* kBaselineLatentKey = "__baseline__";

// Latent key for a profile: skeleton lineage when present (so poor/standard
// variants of one persona share a latent mean), else the text hash.
std::string latent_key_for(const PersonaProfile& profile);

}  // namespace persim
