#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "persim/analytics.hpp"
#include "persim/assessment.hpp"
#include "persim/baseline.hpp"
#include "persim/census.hpp"
#include "persim/gateway.hpp"
#include "persim/item_bank.hpp"
#include "persim/mock_gateway.hpp"
#include "persim/store.hpp"
#include "persim/templates.hpp"

namespace persim {

struct ProviderConfig {
    std::string kind = "mock";  // mock | http
    std::string base_url;
    std::string path = "/v1/chat/completions";
    std::string model;
    std::string api_key_env = "PERSIM_API_KEY";
    double temperature = 0.7;
    int max_tokens = 4096;
    int timeout_s = 120;
    int retries = 3;
    int concurrency = 4;
    int backoff_base_ms = 500;
};

struct PipelineConfig {
    std::string store_path = "persim.db";
    std::string item_bank_path = "data/ipip_neo_120.tsv";
    std::string templates_dir = "data/templates";
    std::string reports_dir = "reports";
    std::vector<double> age_bins = {15, 25, 35, 45, 55, 65, 75};
    ProviderConfig provider;
    MockGatewayConfig mock;

    // JSON config file; absent keys keep defaults. See README for the key set.
    static PipelineConfig load(const std::string& path);
    static PipelineConfig from_json(const std::string& json_text);
    std::string to_json() const;
};

struct AssessStats {
    std::size_t requested = 0;
    std::size_t completed = 0;   // scored this invocation
    std::size_t failed = 0;      // recorded failures this invocation
    std::size_t skipped = 0;     // already present (resume)
};

struct IdentifySummary {
    std::vector<IdentifiabilityReport> pair_reports;   // ring order
    std::optional<IdentifiabilityReport> group_report;
    std::string detail_label;
};

struct PopulationEntry {
    std::string run_id;
    std::string strategy;
    std::array<PersonalityCurve, 5> curves;
    CurveComparison comparison;
    std::size_t records = 0;
};

class Pipeline {
public:
    explicit Pipeline(PipelineConfig config);

    Store& store() { return *store_; }
    Gateway& gateway() { return *gateway_; }
    const ItemBank& bank() const { return bank_; }
    const TemplateSet& templates() const { return templates_; }
    const PipelineConfig& config() const { return config_; }

    // census -> skeleton table
    RunManifest cmd_sample(const std::string& run_id, const std::string& census_path,
                           std::size_t n, const std::string& filter, std::uint64_t seed,
                           int age_jitter);

    // skeletons -> personas (standard | narrative)
    std::size_t cmd_forge(const std::string& run_id, Strategy strategy, std::uint64_t seed);
    // standard personas -> simplified poor twins ("<id>-poor")
    std::size_t cmd_forge_poor(const std::string& run_id, const std::string& from_run);

    // external character file -> persona table (Type II: no skeletons)
    RunManifest cmd_ingest_literary(const std::string& run_id, const std::string& path,
                                    std::uint64_t seed);

    // personas -> sheets -> scores; resumable and parallel across assessments
    AssessStats cmd_assess(const std::string& run_id, int repeats, bool antialign,
                           std::uint64_t seed, int threads = 1,
                           const std::optional<std::string>& only_persona = std::nullopt);

    // no-persona protocol: the model's intrinsic trait baseline
    AssessStats cmd_baseline_llm(const std::string& run_id, int repeats, std::uint64_t seed);

    std::vector<StabilityReport> cmd_eval_stability(const std::string& run_id, CvMode cv_mode);

    // ring 1-2,2-3,...,k-1 plus grouped k-means per detail level present
    std::vector<IdentifySummary> cmd_eval_identify(const std::string& run_id,
                                                   std::uint64_t seed, bool standardized);

    std::vector<PopulationEntry> cmd_eval_population(const std::vector<std::string>& run_ids,
                                                     const std::string& baseline_path);

    // Rescaled trait rows for one persona (analytics input).
    Eigen::MatrixXd persona_traits(const std::string& run_id, const std::string& persona_id);

    // Persona age resolution: skeleton join for synthesized, own age for external.
    std::optional<int> persona_age(const std::string& run_id, const PersonaProfile& p);

    // Report writers (CSV/JSON/SVG under reports_dir/<run_id>/).
    void write_stability_reports(const std::string& run_id,
                                 const std::vector<StabilityReport>& reports);
    void write_identify_reports(const std::string& run_id,
                                const std::vector<IdentifySummary>& summaries);
    void write_population_reports(const std::string& label,
                                  const std::vector<PopulationEntry>& entries,
                                  const HumanBaseline& baseline, bool svg);

private:
    PipelineConfig config_;
    ItemBank bank_;
    TemplateSet templates_;
    std::unique_ptr<Store> store_;
    std::unique_ptr<Gateway> gateway_;
};

std::unique_ptr<Gateway> make_gateway(const PipelineConfig& config, const ItemBank& bank);

}  // namespace persim
