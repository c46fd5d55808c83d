#include "persim/pipeline.hpp"

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "persim/forge.hpp"
#include "persim/literary.hpp"
#include "persim/svg.hpp"
#include "persim/util.hpp"

namespace persim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::atomic<bool> g_interrupted{false};

void handle_sigint(int) { g_interrupted.store(true); }

TraitVector trait_vector_from_json(const json& arr) {
    if (!arr.is_array() || arr.size() != 5)
        throw ConfigError("trait vector must be an array of 5 numbers (N,E,O,A,C)");
    TraitVector v;
    v.scale = ScoreScale::rescaled;
    for (int d = 0; d < 5; ++d) v.values[static_cast<std::size_t>(d)] = arr[d].get<double>();
    return v;
}

json trait_vector_to_json(const TraitVector& v) {
    json arr = json::array();
    for (double x : v.values) arr.push_back(x);
    return arr;
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::string& path) {
    if (path.empty()) return PipelineConfig{};
    return from_json(read_file(path));
}

PipelineConfig PipelineConfig::from_json(const std::string& json_text) {
    PipelineConfig cfg;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    cfg.store_path = j.value("store_path", cfg.store_path);
    cfg.item_bank_path = j.value("item_bank", cfg.item_bank_path);
    cfg.templates_dir = j.value("templates_dir", cfg.templates_dir);
    cfg.reports_dir = j.value("reports_dir", cfg.reports_dir);
    if (j.contains("age_bins")) cfg.age_bins = j["age_bins"].get<std::vector<double>>();
    if (j.contains("provider")) {
        const auto& p = j["provider"];
        cfg.provider.kind = p.value("kind", cfg.provider.kind);
        cfg.provider.base_url = p.value("base_url", cfg.provider.base_url);
        cfg.provider.path = p.value("path", cfg.provider.path);
        cfg.provider.model = p.value("model", cfg.provider.model);
        cfg.provider.api_key_env = p.value("api_key_env", cfg.provider.api_key_env);
        cfg.provider.temperature = p.value("temperature", cfg.provider.temperature);
        cfg.provider.max_tokens = p.value("max_tokens", cfg.provider.max_tokens);
        cfg.provider.timeout_s = p.value("timeout_s", cfg.provider.timeout_s);
        cfg.provider.retries = p.value("retries", cfg.provider.retries);
        cfg.provider.concurrency = p.value("concurrency", cfg.provider.concurrency);
        cfg.provider.backoff_base_ms = p.value("backoff_base_ms", cfg.provider.backoff_base_ms);
    }
    if (j.contains("mock")) {
        const auto& m = j["mock"];
        cfg.mock.seed = m.value("seed", cfg.mock.seed);
        cfg.mock.sigma_standard = m.value("sigma_standard", cfg.mock.sigma_standard);
        cfg.mock.sigma_poor = m.value("sigma_poor", cfg.mock.sigma_poor);
        cfg.mock.latent_band_lo_raw = m.value("latent_band_lo_raw", cfg.mock.latent_band_lo_raw);
        cfg.mock.latent_band_hi_raw = m.value("latent_band_hi_raw", cfg.mock.latent_band_hi_raw);
        if (m.contains("baseline_latent_raw")) {
            auto arr = m["baseline_latent_raw"];
            for (int d = 0; d < 5; ++d)
                cfg.mock.baseline_latent_raw[static_cast<std::size_t>(d)] = arr[d].get<int>();
        }
        cfg.mock.standard_profile_words =
            m.value("standard_profile_words", cfg.mock.standard_profile_words);
        cfg.mock.narrative_profile_words =
            m.value("narrative_profile_words", cfg.mock.narrative_profile_words);
        if (m.contains("latent_overrides"))
            for (auto& [key, arr] : m["latent_overrides"].items())
                cfg.mock.latent_overrides[key] = trait_vector_from_json(arr);
    }
    return cfg;
}

std::string PipelineConfig::to_json() const {
    json overrides = json::object();
    for (const auto& [k, v] : mock.latent_overrides) overrides[k] = trait_vector_to_json(v);
    json j{
        {"store_path", store_path},
        {"item_bank", item_bank_path},
        {"templates_dir", templates_dir},
        {"reports_dir", reports_dir},
        {"age_bins", age_bins},
        {"provider",
         {{"kind", provider.kind},
          {"base_url", provider.base_url},
          {"path", provider.path},
          {"model", provider.model},
          {"api_key_env", provider.api_key_env},
          {"temperature", provider.temperature},
          {"max_tokens", provider.max_tokens},
          {"timeout_s", provider.timeout_s},
          {"retries", provider.retries},
          {"concurrency", provider.concurrency},
          {"backoff_base_ms", provider.backoff_base_ms}}},
        {"mock",
         {{"seed", mock.seed},
          {"sigma_standard", mock.sigma_standard},
          {"sigma_poor", mock.sigma_poor},
          {"latent_band_lo_raw", mock.latent_band_lo_raw},
          {"latent_band_hi_raw", mock.latent_band_hi_raw},
          {"baseline_latent_raw", mock.baseline_latent_raw},
          {"standard_profile_words", mock.standard_profile_words},
          {"narrative_profile_words", mock.narrative_profile_words},
          {"latent_overrides", overrides}}},
    };
    return j.dump(2);
}

std::unique_ptr<Gateway> make_gateway(const PipelineConfig& config, const ItemBank& bank) {
    if (config.provider.kind == "mock")
        return std::make_unique<MockGateway>(config.mock, bank);
    if (config.provider.kind == "http") {
        if (config.provider.base_url.empty())
            throw ConfigError("http provider needs provider.base_url");
        HttpGatewayConfig gc;
        gc.base_url = config.provider.base_url;
        gc.path = config.provider.path;
        gc.model = config.provider.model;
        gc.timeout_s = config.provider.timeout_s;
        gc.max_retries = config.provider.retries;
        gc.concurrency = config.provider.concurrency;
        gc.backoff_base_ms = config.provider.backoff_base_ms;
        if (const char* key = std::getenv(config.provider.api_key_env.c_str()))
            gc.api_key = key;
        return std::make_unique<HttpGateway>(std::move(gc),
                                             make_httplib_transport(config.provider.base_url,
                                                                    config.provider.timeout_s));
    }
    throw ConfigError("unknown provider kind: " + config.provider.kind);
}

Pipeline::Pipeline(PipelineConfig config)
    : config_(std::move(config)),
      bank_(load_item_bank(config_.item_bank_path)),
      templates_(TemplateSet::load(config_.templates_dir)),
      store_(std::make_unique<Store>(config_.store_path)),
      gateway_(make_gateway(config_, bank_)) {
    std::signal(SIGINT, handle_sigint);
}

RunManifest Pipeline::cmd_sample(const std::string& run_id, const std::string& census_path,
                                 std::size_t n, const std::string& filter, std::uint64_t seed,
                                 int age_jitter) {
    auto table = load_census(census_path);
    auto parsed_filter = SamplingFilter::parse(filter);
    SampleOptions opts;
    opts.seed = seed;
    opts.age_jitter = age_jitter;
    auto skeletons = sample_skeletons(table, n, parsed_filter, opts);

    RunManifest run;
    run.run_id = run_id;
    run.strategy = "sampled";
    run.seed = seed;
    run.config_json = config_.to_json();
    run.created_at = iso8601_now();
    store_->put_run(run);
    for (const auto& s : skeletons) store_->put_skeleton(run_id, s);
    return run;
}

std::size_t Pipeline::cmd_forge(const std::string& run_id, Strategy strategy,
                                std::uint64_t seed) {
    if (!store_->get_run(run_id)) throw DataError("no data for run " + run_id);
    auto skeletons = store_->skeletons(run_id);
    if (skeletons.empty()) throw DataError("run " + run_id + " has no skeletons; sample first");
    auto existing = store_->personas(run_id);
    std::set<std::string> have;
    for (const auto& p : existing) have.insert(p.id);

    std::size_t made = 0;
    for (const auto& sk : skeletons) {
        std::string pid = "p-" + sk.id + "-" + to_string(strategy);
        if (have.count(pid)) continue;  // resume: keep completed work
        std::uint64_t s = combine_seed(seed, sk.id);
        PersonaProfile p = strategy == Strategy::narrative
                               ? enrich_narrative(*gateway_, templates_, sk, pid, s)
                               : enrich_standard(*gateway_, templates_, sk, pid, s);
        p.age = sk.age;
        store_->put_persona(run_id, p);
        ++made;
        if (g_interrupted.load()) break;
    }
    store_->set_run_strategy(run_id, std::string(to_string(strategy)));
    return made;
}

std::size_t Pipeline::cmd_forge_poor(const std::string& run_id, const std::string& from_run) {
    if (run_id != from_run)
        throw ConfigError("poor variants are derived inside their source run");
    if (!store_->get_run(run_id)) throw DataError("no data for run " + run_id);
    auto skeletons = store_->skeletons(run_id);
    std::map<std::string, PersonaSkeleton> by_id;
    for (const auto& s : skeletons) by_id[s.id] = s;
    auto personas = store_->personas(run_id);
    std::set<std::string> have;
    for (const auto& p : personas) have.insert(p.id);

    std::size_t made = 0;
    for (const auto& p : personas) {
        if (p.detail_level != DetailLevel::standard || p.strategy == Strategy::poor) continue;
        std::string pid = p.id + "-poor";
        if (have.count(pid)) continue;
        std::optional<PersonaSkeleton> sk;
        if (p.skeleton_id && by_id.count(*p.skeleton_id)) sk = by_id[*p.skeleton_id];
        store_->put_persona(run_id, simplify_to_poor(p, sk, pid));
        ++made;
    }
    return made;
}

RunManifest Pipeline::cmd_ingest_literary(const std::string& run_id, const std::string& path,
                                          std::uint64_t seed) {
    std::size_t dropped = 0;
    auto profiles = load_literary_personas(path, &dropped);
    RunManifest run;
    run.run_id = run_id;
    run.strategy = "literary";
    run.seed = seed;
    run.config_json = config_.to_json();
    run.created_at = iso8601_now();
    store_->put_run(run);
    for (const auto& p : profiles) store_->put_persona(run_id, p);
    return run;
}

AssessStats Pipeline::cmd_assess(const std::string& run_id, int repeats, bool antialign,
                                 std::uint64_t seed, int threads,
                                 const std::optional<std::string>& only_persona) {
    if (repeats < 1) throw ValidationError("repeat count must be >= 1");
    if (!store_->get_run(run_id)) throw DataError("no data for run " + run_id);
    auto personas = store_->personas(run_id);
    if (personas.empty()) throw DataError("run " + run_id + " has no personas; forge first");
    std::map<std::string, PersonaProfile> by_id;
    for (const auto& p : personas) by_id[p.id] = p;

    struct Task {
        std::string persona_id;
        int repeat;
    };
    std::vector<Task> tasks;
    AssessStats stats;
    for (const auto& w : store_->resume(run_id, repeats)) {
        if (only_persona && w.persona_id != *only_persona) continue;
        for (int r : w.remaining_repeats) tasks.push_back({w.persona_id, r});
    }
    std::size_t universe = 0;
    for (const auto& p : personas)
        if (!only_persona || p.id == *only_persona) universe += static_cast<std::size_t>(repeats);
    stats.requested = universe;
    stats.skipped = universe - tasks.size();

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0}, failed{0};
    std::exception_ptr first_error;
    std::mutex error_mu;

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size() || g_interrupted.load()) return;
            const auto& t = tasks[i];
            const auto& profile = by_id.at(t.persona_id);
            std::string aid = Store::assessment_id(run_id, t.persona_id, t.repeat);
            std::uint64_t aseed = combine_seed(combine_seed(seed, t.persona_id),
                                               static_cast<std::uint64_t>(t.repeat));
            try {
                auto outcome = run_assessment(*gateway_, templates_, bank_, profile, antialign,
                                              aid, aseed);
                if (outcome.ok) {
                    store_->put_assessment(run_id, outcome, aseed);
                    done.fetch_add(1);
                } else {
                    store_->put_failure(run_id, outcome);
                    failed.fetch_add(1);
                }
            } catch (...) {
                std::lock_guard lk(error_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    int nthreads = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads - 1; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    stats.completed = done.load();
    stats.failed = failed.load();
    if (antialign) store_->set_run_strategy(run_id, "antialign");
    if (stats.skipped + stats.completed == stats.requested && stats.failed == 0)
        store_->set_run_status(run_id, "complete");
    return stats;
}

AssessStats Pipeline::cmd_baseline_llm(const std::string& run_id, int repeats,
                                       std::uint64_t seed) {
    if (repeats < 1) throw ValidationError("repeat count must be >= 1");
    if (!store_->get_run(run_id)) {
        RunManifest run;
        run.run_id = run_id;
        run.strategy = "baseline-llm";
        run.seed = seed;
        run.config_json = config_.to_json();
        run.created_at = iso8601_now();
        store_->put_run(run);
        PersonaProfile pseudo;
        pseudo.id = "baseline";
        pseudo.text = "";
        pseudo.strategy = Strategy::standard;
        pseudo.detail_level = DetailLevel::standard;
        pseudo.source = ProfileSource::synthesized;
        store_->put_persona(run_id, pseudo);
    }

    AssessStats stats;
    stats.requested = static_cast<std::size_t>(repeats);
    for (int r = 0; r < repeats; ++r) {
        if (g_interrupted.load()) break;
        std::string aid = Store::assessment_id(run_id, "baseline", r);
        if (store_->has_personality(aid)) {
            ++stats.skipped;
            continue;
        }
        std::uint64_t aseed = combine_seed(combine_seed(seed, "baseline"),
                                           static_cast<std::uint64_t>(r));
        auto outcome = run_baseline_assessment(*gateway_, templates_, bank_, aid, aseed);
        outcome.persona_id = "baseline";
        for (auto& ex : outcome.sheets) ex.sheet.persona_id = "baseline";
        if (outcome.ok) {
            store_->put_assessment(run_id, outcome, aseed);
            ++stats.completed;
        } else {
            store_->put_failure(run_id, outcome);
            ++stats.failed;
        }
    }
    return stats;
}

Eigen::MatrixXd Pipeline::persona_traits(const std::string& run_id,
                                         const std::string& persona_id) {
    auto records = store_->personalities_for_persona(run_id, persona_id);
    std::vector<TraitVector> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back(r.rescaled);
    return traits_matrix(rows);
}

std::optional<int> Pipeline::persona_age(const std::string& run_id, const PersonaProfile& p) {
    if (p.age) return p.age;
    if (p.skeleton_id) {
        for (const auto& s : store_->skeletons(run_id))
            if (s.id == *p.skeleton_id) return s.age;
    }
    return std::nullopt;
}

std::vector<StabilityReport> Pipeline::cmd_eval_stability(const std::string& run_id,
                                                          CvMode cv_mode) {
    if (!store_->get_run(run_id)) throw DataError("no data for run " + run_id);
    auto personas = store_->personas(run_id);
    std::vector<StabilityReport> reports;
    for (const auto& p : personas) {
        auto traits = persona_traits(run_id, p.id);
        if (traits.rows() < 10) continue;  // not enough assessments to evaluate
        reports.push_back(
            stability_report(p.id, to_string(p.detail_level), traits, cv_mode));
    }
    if (reports.empty())
        throw DataError("no data for run " + run_id + ": assess before eval-stability");
    return reports;
}

std::vector<IdentifySummary> Pipeline::cmd_eval_identify(const std::string& run_id,
                                                         std::uint64_t seed,
                                                         bool standardized) {
    if (!store_->get_run(run_id)) throw DataError("no data for run " + run_id);
    auto personas = store_->personas(run_id);
    std::map<DetailLevel, std::vector<PersonaProfile>> by_detail;
    for (const auto& p : personas) {
        if (persona_traits(run_id, p.id).rows() >= 10) by_detail[p.detail_level].push_back(p);
    }
    if (by_detail.empty())
        throw DataError("no data for run " + run_id + ": assess before eval-identify");

    std::vector<IdentifySummary> out;
    for (auto& [detail, group] : by_detail) {
        std::sort(group.begin(), group.end(),
                  [](const PersonaProfile& a, const PersonaProfile& b) { return a.id < b.id; });
        IdentifySummary sum;
        sum.detail_label = to_string(detail);
        std::vector<Eigen::MatrixXd> mats;
        std::vector<std::string> ids;
        for (const auto& p : group) {
            mats.push_back(persona_traits(run_id, p.id));
            ids.push_back(p.id);
        }
        const std::size_t k = group.size();
        if (k < 2) continue;
        // Ring 1-2, 2-3, ..., k-1 (single pair when k == 2).
        for (std::size_t i = 0; i < (k == 2 ? 1 : k); ++i) {
            std::size_t j = (i + 1) % k;
            sum.pair_reports.push_back(identify_pair(ids[i], mats[i], ids[j], mats[j],
                                                     combine_seed(seed, ids[i] + "|" + ids[j]),
                                                     standardized));
        }
        sum.group_report = identify_group(ids, mats, combine_seed(seed, "group"), standardized);
        out.push_back(std::move(sum));
    }
    return out;
}

std::vector<PopulationEntry> Pipeline::cmd_eval_population(
    const std::vector<std::string>& run_ids, const std::string& baseline_path) {
    auto baseline = load_baseline(baseline_path);
    std::vector<PopulationEntry> out;
    for (const auto& run_id : run_ids) {
        auto run = store_->get_run(run_id);
        if (!run) throw DataError("no data for run " + run_id);
        auto personas = store_->personas(run_id);
        std::map<std::string, std::optional<int>> ages;
        for (const auto& p : personas) ages[p.id] = persona_age(run_id, p);

        std::vector<std::pair<int, TraitVector>> aged;
        for (const auto& rec : store_->personalities(run_id)) {
            auto it = ages.find(rec.persona_id);
            if (it == ages.end() || !it->second) continue;
            aged.push_back({*it->second, rec.rescaled});
        }
        if (aged.empty())
            throw DataError("no data for run " + run_id + ": assess before eval-population");

        PopulationEntry e;
        e.run_id = run_id;
        e.strategy = run->strategy;
        e.records = aged.size();
        e.curves = build_curves(aged, baseline.bin_edges());
        e.comparison = compare_to_baseline(run->strategy, e.curves, baseline);
        out.push_back(std::move(e));
    }
    return out;
}

void Pipeline::write_stability_reports(const std::string& run_id,
                                       const std::vector<StabilityReport>& reports) {
    fs::path dir = fs::path(config_.reports_dir) / run_id;
    fs::create_directories(dir);
    std::string csv = "persona_id,detail,n_raw,n_kept,cv,kurtosis\n";
    json jrep = json::array();
    for (const auto& r : reports) {
        char line[256];
        std::snprintf(line, sizeof(line), "%s,%s,%zu,%zu,%.6f,%.6f\n", r.persona_id.c_str(),
                      r.label.c_str(), r.n_raw, r.n_kept, r.cv, r.kurtosis);
        csv += line;
        jrep.push_back({{"persona_id", r.persona_id},
                        {"detail", r.label},
                        {"n_raw", r.n_raw},
                        {"n_kept", r.n_kept},
                        {"cv", r.cv},
                        {"kurtosis", r.kurtosis},
                        {"mean_traits", trait_vector_to_json(r.mean_traits)},
                        {"distances", r.mahalanobis_distances}});
        // KDE curve as plot-ready CSV plus a small SVG.
        std::string kcsv = "grid,density\n";
        for (std::size_t i = 0; i < r.kde_curve.grid.size(); ++i)
            kcsv += std::to_string(r.kde_curve.grid[i]) + "," +
                    std::to_string(r.kde_curve.density[i]) + "\n";
        write_file((dir / ("kde_" + r.persona_id + ".csv")).string(), kcsv);
        SvgSeries s{r.persona_id + " (" + r.label + ")", "#1f77b4", r.kde_curve.grid,
                    r.kde_curve.density};
        write_file((dir / ("kde_" + r.persona_id + ".svg")).string(),
                   render_line_chart("Mahalanobis distance density", {s}));
    }
    write_file((dir / "stability.csv").string(), csv);
    write_file((dir / "stability.json").string(), jrep.dump(2));
}

void Pipeline::write_identify_reports(const std::string& run_id,
                                      const std::vector<IdentifySummary>& summaries) {
    fs::path dir = fs::path(config_.reports_dir) / run_id;
    fs::create_directories(dir);
    std::string csv = "scope,detail,personas,ari,acd,pc1,pc2,samples\n";
    json jrep = json::array();
    auto row = [&](const std::string& scope, const std::string& detail,
                   const IdentifiabilityReport& r) {
        std::string ids;
        for (const auto& id : r.persona_ids) ids += (ids.empty() ? "" : "|") + id;
        char line[512];
        std::snprintf(line, sizeof(line), "%s,%s,%s,%.6f,%.6f,%.6f,%.6f,%zu\n", scope.c_str(),
                      detail.c_str(), ids.c_str(), r.ari, r.centroid_dist,
                      r.pca_explained.size() > 0 ? r.pca_explained[0] : 0.0,
                      r.pca_explained.size() > 1 ? r.pca_explained[1] : 0.0, r.sample_count);
        csv += line;
        jrep.push_back({{"scope", scope},
                        {"detail", detail},
                        {"personas", r.persona_ids},
                        {"ari", r.ari},
                        {"centroid_distance", r.centroid_dist},
                        {"pca_explained", r.pca_explained},
                        {"samples", r.sample_count}});
    };
    for (const auto& s : summaries) {
        for (const auto& p : s.pair_reports) row("pair", s.detail_label, p);
        if (s.group_report) row("group", s.detail_label, *s.group_report);
    }
    write_file((dir / "identify.csv").string(), csv);
    write_file((dir / "identify.json").string(), jrep.dump(2));
}

void Pipeline::write_population_reports(const std::string& label,
                                        const std::vector<PopulationEntry>& entries,
                                        const HumanBaseline& baseline, bool svg) {
    fs::path dir = fs::path(config_.reports_dir) / label;
    fs::create_directories(dir);
    std::string table = "strategy,run_id,records,N,E,O,A,C,total\n";
    json jrep = json::array();
    for (const auto& e : entries) {
        char line[512];
        std::snprintf(line, sizeof(line), "%s,%s,%zu,%.2f,%.2f,%.2f,%.2f,%.2f,%.2f\n",
                      e.strategy.c_str(), e.run_id.c_str(), e.records,
                      e.comparison.per_trait.at('N'), e.comparison.per_trait.at('E'),
                      e.comparison.per_trait.at('O'), e.comparison.per_trait.at('A'),
                      e.comparison.per_trait.at('C'), e.comparison.total);
        table += line;
        json per;
        for (const auto& [code, d] : e.comparison.per_trait) per[std::string(1, code)] = d;
        jrep.push_back({{"strategy", e.strategy},
                        {"run_id", e.run_id},
                        {"records", e.records},
                        {"per_trait_distance", per},
                        {"total_distance", e.comparison.total}});

        std::string curves = "trait,bin_lo,bin_hi,llm_value,count,human_value\n";
        for (Domain d : kDomains) {
            const auto& c = e.curves[static_cast<int>(d)];
            const auto& h = baseline.curve(d);
            for (std::size_t b = 0; b < c.bin_count(); ++b) {
                char cl[256];
                std::snprintf(cl, sizeof(cl), "%c,%g,%g,%s,%zu,%g\n", domain_code(d),
                              c.bin_edges[b], c.bin_edges[b + 1],
                              c.defined(b) ? std::to_string(c.values[b]).c_str() : "",
                              c.counts[b], h.values[b]);
                curves += cl;
            }
        }
        write_file((dir / ("curves_" + e.run_id + ".csv")).string(), curves);
    }
    write_file((dir / "population.csv").string(), table);
    write_file((dir / "population.json").string(), jrep.dump(2));

    if (svg) {
        static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};
        for (Domain d : kDomains) {
            std::vector<SvgSeries> series;
            const auto& h = baseline.curve(d);
            std::vector<double> mids;
            for (std::size_t b = 0; b < h.bin_count(); ++b)
                mids.push_back((h.bin_edges[b] + h.bin_edges[b + 1]) / 2.0);
            series.push_back({"human", "#444444", mids, h.values});
            int ci = 0;
            for (const auto& e : entries) {
                const auto& c = e.curves[static_cast<int>(d)];
                std::vector<double> vals;
                for (std::size_t b = 0; b < c.bin_count(); ++b)
                    vals.push_back(c.defined(b) ? c.values[b]
                                                : std::numeric_limits<double>::quiet_NaN());
                series.push_back({e.strategy, palette[ci++ % 5], mids, vals});
            }
            write_file((dir / (std::string("curve_") + domain_code(d) + ".svg")).string(),
                       render_line_chart(std::string(domain_name(d)) + " by age", series));
        }
    }
}

}  // namespace persim
