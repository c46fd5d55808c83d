#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "persim/pipeline.hpp"
#include "persim/util.hpp"

using namespace persim;

int main(int argc, char** argv) {
    CLI::App app{"persona personality simulation and evaluation pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string store_override;
    std::string provider_override;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--store", store_override, "store file path (overrides config)");
    app.add_option("--provider", provider_override, "provider kind: mock|http");

    auto load_pipeline = [&]() {
        PipelineConfig cfg = PipelineConfig::load(config_path);
        if (!store_override.empty()) cfg.store_path = store_override;
        if (!provider_override.empty()) cfg.provider.kind = provider_override;
        return std::make_unique<Pipeline>(std::move(cfg));
    };

    // sample
    auto* sample = app.add_subcommand("sample", "sample skeleton personas from census microdata");
    std::string s_run, s_census = "data/adult_sample.csv", s_filter;
    std::size_t s_n = 600;
    std::uint64_t s_seed = 0;
    int s_jitter = 0;
    sample->add_option("--run", s_run, "run id")->required();
    sample->add_option("--census", s_census, "census file (Adult layout)");
    sample->add_option("--n", s_n, "number of skeletons");
    sample->add_option("--filter", s_filter, "conditional filter, e.g. gender=Female,age=25..40");
    sample->add_option("--seed", s_seed, "sampling seed");
    sample->add_option("--age-jitter", s_jitter, "uniform +/- age jitter (population preset: 2)");
    sample->callback([&] {
        auto p = load_pipeline();
        auto run = p->cmd_sample(s_run, s_census, s_n, s_filter, s_seed, s_jitter);
        std::printf("run %s: %zu skeletons sampled\n", run.run_id.c_str(), s_n);
    });

    // forge
    auto* forge = app.add_subcommand("forge", "generate persona profiles from skeletons");
    std::string f_run, f_strategy = "standard", f_poor_from;
    std::uint64_t f_seed = 0;
    forge->add_option("--run", f_run, "run id");
    forge->add_option("--strategy", f_strategy, "standard|narrative");
    forge->add_option("--poor-from", f_poor_from, "derive simplified poor variants inside a run");
    forge->add_option("--seed", f_seed, "generation seed");
    forge->callback([&] {
        auto p = load_pipeline();
        if (!f_poor_from.empty()) {
            std::size_t n = p->cmd_forge_poor(f_poor_from, f_poor_from);
            std::printf("run %s: %zu poor variants derived\n", f_poor_from.c_str(), n);
            return;
        }
        if (f_run.empty()) throw ConfigError("forge needs --run or --poor-from");
        Strategy st = strategy_from_string(f_strategy);
        if (st != Strategy::standard && st != Strategy::narrative)
            throw ConfigError("forge --strategy accepts standard|narrative");
        std::size_t n = p->cmd_forge(f_run, st, f_seed);
        std::printf("run %s: %zu personas forged (%s)\n", f_run.c_str(), n, f_strategy.c_str());
    });

    // ingest-literary
    auto* lit = app.add_subcommand("ingest-literary", "load external literary personas");
    std::string l_run, l_file = "data/literary_personas.jsonl";
    std::uint64_t l_seed = 0;
    lit->add_option("--run", l_run, "run id")->required();
    lit->add_option("--file", l_file, "JSONL character file");
    lit->add_option("--seed", l_seed, "run seed");
    lit->callback([&] {
        auto p = load_pipeline();
        p->cmd_ingest_literary(l_run, l_file, l_seed);
        std::printf("run %s: literary personas ingested\n", l_run.c_str());
    });

    // assess
    auto* assess = app.add_subcommand("assess", "administer the instrument to a run's personas");
    std::string a_run, a_only;
    int a_repeat = 1, a_threads = 1;
    bool a_antialign = false;
    std::uint64_t a_seed = 0;
    assess->add_option("--run", a_run, "run id")->required();
    assess->add_option("--repeat", a_repeat, "assessments per persona");
    assess->add_flag("--antialign", a_antialign, "append the anti-alignment instruction");
    assess->add_option("--seed", a_seed, "assessment seed");
    assess->add_option("--threads", a_threads, "parallel assessments");
    assess->add_option("--persona", a_only, "restrict to one persona id");
    assess->callback([&] {
        auto p = load_pipeline();
        auto st = p->cmd_assess(a_run, a_repeat, a_antialign, a_seed, a_threads,
                                a_only.empty() ? std::nullopt
                                               : std::optional<std::string>(a_only));
        std::printf("run %s: %zu requested, %zu completed, %zu failed, %zu already done\n",
                    a_run.c_str(), st.requested, st.completed, st.failed, st.skipped);
    });

    // baseline-llm
    auto* base = app.add_subcommand("baseline-llm", "no-persona intrinsic baseline protocol");
    std::string b_run;
    int b_repeat = 300;
    std::uint64_t b_seed = 0;
    base->add_option("--run", b_run, "run id")->required();
    base->add_option("--repeat", b_repeat, "number of assessments");
    base->add_option("--seed", b_seed, "assessment seed");
    base->callback([&] {
        auto p = load_pipeline();
        auto st = p->cmd_baseline_llm(b_run, b_repeat, b_seed);
        std::printf("run %s: %zu completed, %zu failed, %zu already done\n", b_run.c_str(),
                    st.completed, st.failed, st.skipped);
    });

    // eval-stability
    auto* est = app.add_subcommand("eval-stability", "stability/convergence report per persona");
    std::string es_run, es_cv = "distances";
    est->add_option("--run", es_run, "run id")->required();
    est->add_option("--cv-on", es_cv, "CV basis: distances|scores");
    est->callback([&] {
        auto p = load_pipeline();
        CvMode mode = es_cv == "scores" ? CvMode::scores : CvMode::distances;
        if (es_cv != "scores" && es_cv != "distances")
            throw ConfigError("--cv-on accepts distances|scores");
        auto reports = p->cmd_eval_stability(es_run, mode);
        p->write_stability_reports(es_run, reports);
        std::printf("persona_id,detail,n_raw,n_kept,cv,kurtosis\n");
        for (const auto& r : reports)
            std::printf("%s,%s,%zu,%zu,%.4f,%.4f\n", r.persona_id.c_str(), r.label.c_str(),
                        r.n_raw, r.n_kept, r.cv, r.kurtosis);
    });

    // eval-identify
    auto* eid = app.add_subcommand("eval-identify", "pairwise ring and grouped identifiability");
    std::string ei_run, ei_space = "standardized";
    std::uint64_t ei_seed = 0;
    eid->add_option("--run", ei_run, "run id")->required();
    eid->add_option("--seed", ei_seed, "clustering seed");
    eid->add_option("--cluster-space", ei_space, "standardized|raw");
    eid->callback([&] {
        auto p = load_pipeline();
        if (ei_space != "standardized" && ei_space != "raw")
            throw ConfigError("--cluster-space accepts standardized|raw");
        auto summaries = p->cmd_eval_identify(ei_run, ei_seed, ei_space == "standardized");
        p->write_identify_reports(ei_run, summaries);
        std::printf("scope,detail,personas,ari,acd,pc1,pc2\n");
        for (const auto& s : summaries) {
            for (const auto& r : s.pair_reports)
                std::printf("pair,%s,%s|%s,%.4f,%.4f,%.4f,%.4f\n", s.detail_label.c_str(),
                            r.persona_ids[0].c_str(), r.persona_ids[1].c_str(), r.ari,
                            r.centroid_dist, r.pca_explained[0], r.pca_explained[1]);
            if (s.group_report)
                std::printf("group,%s,%zu personas,%.4f,,%.4f,%.4f\n", s.detail_label.c_str(),
                            s.group_report->persona_count, s.group_report->ari,
                            s.group_report->pca_explained[0], s.group_report->pca_explained[1]);
        }
    });

    // eval-population
    auto* epop = app.add_subcommand("eval-population",
                                    "age curves and distance to the human baseline");
    std::vector<std::string> ep_runs;
    std::string ep_baseline = "data/human_baseline.csv", ep_label = "population";
    bool ep_svg = false;
    epop->add_option("--runs", ep_runs, "run ids to compare (progressive chain order)")
        ->required()
        ->delimiter(',');
    epop->add_option("--baseline", ep_baseline, "human baseline CSV");
    epop->add_option("--label", ep_label, "report directory label");
    epop->add_flag("--svg", ep_svg, "emit per-trait SVG charts");
    epop->callback([&] {
        auto p = load_pipeline();
        auto entries = p->cmd_eval_population(ep_runs, ep_baseline);
        auto baseline = load_baseline(ep_baseline);
        p->write_population_reports(ep_label, entries, baseline, ep_svg);
        std::printf("strategy,N,E,O,A,C,total\n");
        for (const auto& e : entries)
            std::printf("%s,%.2f,%.2f,%.2f,%.2f,%.2f,%.2f\n", e.strategy.c_str(),
                        e.comparison.per_trait.at('N'), e.comparison.per_trait.at('E'),
                        e.comparison.per_trait.at('O'), e.comparison.per_trait.at('A'),
                        e.comparison.per_trait.at('C'), e.comparison.total);
    });

    // export
    auto* exp = app.add_subcommand("export", "dump a store table as CSV");
    std::string x_table, x_out;
    exp->add_option("--table", x_table,
                    "runs|skeleton|persona|sheet_answer|question_answer|personality|"
                    "assessment_failure")
        ->required();
    exp->add_option("--out", x_out, "output file (default: stdout)");
    exp->callback([&] {
        auto p = load_pipeline();
        std::string csv = p->store().export_csv(x_table);
        if (x_out.empty()) std::fwrite(csv.data(), 1, csv.size(), stdout);
        else write_file(x_out, csv);
    });

    // Exit codes: 0 ok, 2 config, 3 data, 4 provider, 5 validation, 1 other.
    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const ProviderError& e) {
        std::cerr << "provider error: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
