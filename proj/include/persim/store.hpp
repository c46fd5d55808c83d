#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "persim/assessment.hpp"
#include "persim/types.hpp"

struct sqlite3;

namespace persim {

struct RunManifest {
    std::string run_id;
    std::string strategy;
    std::uint64_t seed = 0;
    std::string config_json;  // immutable snapshot taken at creation
    std::string created_at;
    std::string status = "in_progress";  // in_progress | complete | failed
};

struct PendingWork {
    std::string persona_id;
    std::vector<int> remaining_repeats;  // repeat indexes without a scored row
    int failure_count = 0;
};

// Single-file store mirroring the pipeline table design: runs, skeleton,
// persona, sheet_answer, question_answer, personality (+ assessment_failure
// bookkeeping). Append-only with soft-delete flags; one writer, serialized
// internally; see docs/schema.md for the column-level schema.
class Store {
public:
    static constexpr int kSchemaVersion = 1;

    explicit Store(const std::string& path);  // creates or validates the schema
    ~Store();
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    void put_run(const RunManifest& run);
    void set_run_status(const std::string& run_id, const std::string& status);
    void set_run_strategy(const std::string& run_id, const std::string& strategy);
    std::optional<RunManifest> get_run(const std::string& run_id) const;
    std::vector<RunManifest> runs() const;

    void put_skeleton(const std::string& run_id, const PersonaSkeleton& s);
    std::vector<PersonaSkeleton> skeletons(const std::string& run_id) const;

    void put_persona(const std::string& run_id, const PersonaProfile& p);
    std::vector<PersonaProfile> personas(const std::string& run_id) const;
    std::optional<PersonaProfile> persona(const std::string& run_id,
                                          const std::string& persona_id) const;

    // Writes all six sheets, the 120 question answers and the personality row
    // in one transaction; a crash can never leave a scored personality row
    // without its sheets.
    void put_assessment(const std::string& run_id, const AssessmentOutcome& outcome,
                        std::uint64_t seed);
    void put_failure(const std::string& run_id, const AssessmentOutcome& outcome);

    bool has_personality(const std::string& assessment_id) const;
    std::vector<AssessmentRecord> personalities(const std::string& run_id) const;
    std::vector<AssessmentRecord> personalities_for_persona(const std::string& run_id,
                                                            const std::string& persona_id) const;
    std::vector<ItemResponse> question_answers(const std::string& assessment_id) const;
    int failure_count(const std::string& run_id, const std::string& persona_id) const;

    // Personas of a run still lacking scored assessments for repeat indexes
    // 0..repeats-1 (previously failed ids stay pending, with their count).
    std::vector<PendingWork> resume(const std::string& run_id, int repeats) const;

    // Deterministic CSV dump (ORDER BY primary key) of one logical table.
    std::string export_csv(const std::string& table) const;

    static std::string assessment_id(const std::string& run_id, const std::string& persona_id,
                                     int repeat_index);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace persim
