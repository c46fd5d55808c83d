#include "persim/store.hpp"

#include <sqlite3.h>

#include <json.hpp>

#include "persim/util.hpp"

namespace persim {

namespace {

const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS meta(
  key TEXT PRIMARY KEY,
  value TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS runs(
  run_id TEXT PRIMARY KEY,
  strategy TEXT NOT NULL,
  seed INTEGER NOT NULL,
  config TEXT NOT NULL,
  created_at TEXT NOT NULL,
  status TEXT NOT NULL,
  deleted INTEGER NOT NULL DEFAULT 0);
CREATE TABLE IF NOT EXISTS skeleton(
  run_id TEXT NOT NULL REFERENCES runs(run_id),
  id TEXT NOT NULL,
  age INTEGER NOT NULL,
  gender TEXT NOT NULL,
  race TEXT,
  education TEXT,
  occupation TEXT,
  workclass TEXT,
  country TEXT,
  income_bracket TEXT,
  capital_gain INTEGER NOT NULL DEFAULT 0,
  capital_loss INTEGER NOT NULL DEFAULT 0,
  deleted INTEGER NOT NULL DEFAULT 0,
  PRIMARY KEY(run_id, id));
CREATE TABLE IF NOT EXISTS persona(
  run_id TEXT NOT NULL REFERENCES runs(run_id),
  id TEXT NOT NULL,
  skeleton_id TEXT,
  text TEXT NOT NULL,
  strategy TEXT NOT NULL,
  detail_level TEXT NOT NULL,
  source TEXT NOT NULL,
  word_count INTEGER NOT NULL,
  template_hash TEXT,
  substandard INTEGER NOT NULL DEFAULT 0,
  age INTEGER,
  deleted INTEGER NOT NULL DEFAULT 0,
  PRIMARY KEY(run_id, id),
  FOREIGN KEY(run_id, skeleton_id) REFERENCES skeleton(run_id, id));
CREATE TABLE IF NOT EXISTS sheet_answer(
  assessment_id TEXT NOT NULL,
  run_id TEXT NOT NULL,
  persona_id TEXT NOT NULL,
  sheet_index INTEGER NOT NULL,
  raw_text TEXT NOT NULL,
  attempts INTEGER NOT NULL,
  PRIMARY KEY(assessment_id, sheet_index),
  FOREIGN KEY(run_id, persona_id) REFERENCES persona(run_id, id));
CREATE TABLE IF NOT EXISTS question_answer(
  assessment_id TEXT NOT NULL,
  item_id INTEGER NOT NULL,
  choice INTEGER NOT NULL,
  rationale TEXT,
  PRIMARY KEY(assessment_id, item_id));
CREATE TABLE IF NOT EXISTS personality(
  assessment_id TEXT PRIMARY KEY,
  run_id TEXT NOT NULL,
  persona_id TEXT NOT NULL,
  seed INTEGER NOT NULL,
  n_raw REAL NOT NULL, e_raw REAL NOT NULL, o_raw REAL NOT NULL,
  a_raw REAL NOT NULL, c_raw REAL NOT NULL,
  n_res REAL NOT NULL, e_res REAL NOT NULL, o_res REAL NOT NULL,
  a_res REAL NOT NULL, c_res REAL NOT NULL,
  facets TEXT NOT NULL,
  FOREIGN KEY(run_id, persona_id) REFERENCES persona(run_id, id));
CREATE TABLE IF NOT EXISTS assessment_failure(
  assessment_id TEXT PRIMARY KEY,
  run_id TEXT NOT NULL,
  persona_id TEXT NOT NULL,
  sheet_index INTEGER,
  reason TEXT NOT NULL,
  created_at TEXT NOT NULL,
  FOREIGN KEY(run_id, persona_id) REFERENCES persona(run_id, id));
)sql";

std::string csv_escape(const std::string& v) {
    if (v.find_first_of(",\"\n\r") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

struct Store::Impl {
    sqlite3* db = nullptr;
    mutable std::mutex mu;  // single-writer; reads share the connection

    ~Impl() {
        if (db) sqlite3_close(db);
    }

    void exec(const std::string& sql) {
        char* err = nullptr;
        if (sqlite3_exec(db, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
            std::string msg = err ? err : "unknown sqlite error";
            sqlite3_free(err);
            throw DataError("sqlite: " + msg);
        }
    }

    // Tiny prepared-statement helper; positional binds, throws DataError.
    class Stmt {
    public:
        Stmt(sqlite3* db, const std::string& sql) {
            if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr) != SQLITE_OK)
                throw DataError(std::string("sqlite prepare: ") + sqlite3_errmsg(db));
        }
        ~Stmt() { sqlite3_finalize(stmt_); }
        Stmt& bind(int i, const std::string& v) {
            sqlite3_bind_text(stmt_, i, v.c_str(), -1, SQLITE_TRANSIENT);
            return *this;
        }
        Stmt& bind(int i, long long v) {
            sqlite3_bind_int64(stmt_, i, v);
            return *this;
        }
        Stmt& bind(int i, double v) {
            sqlite3_bind_double(stmt_, i, v);
            return *this;
        }
        Stmt& bind_null(int i) {
            sqlite3_bind_null(stmt_, i);
            return *this;
        }
        bool step() {
            int rc = sqlite3_step(stmt_);
            if (rc == SQLITE_ROW) return true;
            if (rc == SQLITE_DONE) return false;
            throw DataError(std::string("sqlite step: ") +
                            sqlite3_errmsg(sqlite3_db_handle(stmt_)));
        }
        std::string text(int col) const {
            const unsigned char* t = sqlite3_column_text(stmt_, col);
            return t ? reinterpret_cast<const char*>(t) : "";
        }
        bool is_null(int col) const { return sqlite3_column_type(stmt_, col) == SQLITE_NULL; }
        long long integer(int col) const { return sqlite3_column_int64(stmt_, col); }
        double real(int col) const { return sqlite3_column_double(stmt_, col); }
        int column_count() const { return sqlite3_column_count(stmt_); }
        std::string column_name(int col) const { return sqlite3_column_name(stmt_, col); }

    private:
        sqlite3_stmt* stmt_ = nullptr;
    };
};

Store::Store(const std::string& path) : impl_(std::make_unique<Impl>()) {
    if (sqlite3_open(path.c_str(), &impl_->db) != SQLITE_OK)
        throw DataError("cannot open store at " + path + ": " + sqlite3_errmsg(impl_->db));
    impl_->exec("PRAGMA foreign_keys = ON;");
    impl_->exec("PRAGMA journal_mode = WAL;");
    impl_->exec(kSchema);
    // Version stamp: written on a fresh store, checked on reopen.
    Impl::Stmt q(impl_->db, "SELECT value FROM meta WHERE key='schema_version'");
    if (q.step()) {
        int found = static_cast<int>(*parse_int(q.text(0)));
        if (found != kSchemaVersion)
            throw DataError("store schema version " + std::to_string(found) +
                            " needs migration to " + std::to_string(kSchemaVersion));
    } else {
        Impl::Stmt ins(impl_->db, "INSERT INTO meta(key,value) VALUES('schema_version',?1)");
        ins.bind(1, std::to_string(kSchemaVersion));
        ins.step();
    }
}

Store::~Store() = default;

std::string Store::assessment_id(const std::string& run_id, const std::string& persona_id,
                                 int repeat_index) {
    return run_id + "/" + persona_id + "/r" + std::to_string(repeat_index);
}

void Store::put_run(const RunManifest& run) {
    std::lock_guard lk(impl_->mu);
    Impl::Stmt s(impl_->db,
                 "INSERT INTO runs(run_id,strategy,seed,config,created_at,status) "
                 "VALUES(?1,?2,?3,?4,?5,?6)");
    s.bind(1, run.run_id)
        .bind(2, run.strategy)
        .bind(3, static_cast<long long>(run.seed))
        .bind(4, run.config_json)
        .bind(5, run.created_at)
        .bind(6, run.status);
    s.step();
}

void Store::set_run_status(const std::string& run_id, const std::string& status) {
    std::lock_guard lk(impl_->mu);
    Impl::Stmt s(impl_->db, "UPDATE runs SET status=?2 WHERE run_id=?1");
    s.bind(1, run_id).bind(2, status);
    s.step();
}

void Store::set_run_strategy(const std::string& run_id, const std::string& strategy) {
    std::lock_guard lk(impl_->mu);
    Impl::Stmt s(impl_->db, "UPDATE runs SET strategy=?2 WHERE run_id=?1");
    s.bind(1, run_id).bind(2, strategy);
    s.step();
}

std::optional<RunManifest> Store::get_run(const std::string& run_id) const {
    std::lock_guard lk(impl_->mu);
    Impl::Stmt s(impl_->db,
                 "SELECT run_id,strategy,seed,config,created_at,status FROM runs "
                 "WHERE run_id=?1 AND deleted=0");
    s.bind(1, run_id);
    if (!s.step()) return std::nullopt;
    RunManifest r;
    r.run_id = s.text(0);
    r.strategy = s.text(1);
    r.seed = static_cast<std::uint64_t>(s.integer(2));
    r.config_json = s.text(3);
    r.created_at = s.text(4);
    r.status = s.text(5);
    return r;
}

std::vector<RunManifest> Store::runs() const {
    std::lock_guard lk(impl_->mu);
    Impl::Stmt s(impl_->db,
                 "SELECT run_id,strategy,seed,config,created_at,status FROM runs "
                 "WHERE deleted=0 ORDER BY run_id");
    std::vector<RunManifest> out;
    while (s.step()) {
        RunManifest r;
        r.run_id = s.text(0);
        r.strategy = s.text(1);
        r.seed = static_cast<std::uint64_t>(s.integer(2));
        r.config_json = s.text(3);
        r.created_at = s.text(4);
        r.status = s.text(5);
        out.push_back(std::move(r));
    }
    return out;
}

void Store::put_skeleton(const std::string& run_id, const PersonaSkeleton& s) {
    std::lock_guard lk(impl_->mu);
    Impl::Stmt st(impl_->db,
                  "INSERT INTO skeleton(run_id,id,age,gender,race,education,occupation,"
                  "workclass,country,income_bracket,capital_gain,capital_loss) "
                  "VALUES(?1,?2,?3,?4,?5,?6,?7,?8,?9,?10,?11,?12)");
    st.bind(1, run_id)
        .bind(2, s.id)
        .bind(3, static_cast<long long>(s.age))
        .bind(4, s.gender)
        .bind(5, s.race)
        .bind(6, s.education)
        .bind(7, s.occupation)
        .bind(8, s.workclass)
        .bind(9, s.country)
        .bind(10, s.income_bracket)
        .bind(11, s.capital_gain)
        .bind(12, s.capital_loss);
    st.step();
}

std::vector<PersonaSkeleton> Store::skeletons(const std::string& run_id) const {
    std::lock_guard lk(impl_->mu);
    Impl::Stmt s(impl_->db,
                 "SELECT id,age,gender,race,education,occupation,workclass,country,"
                 "income_bracket,capital_gain,capital_loss FROM skeleton "
                 "WHERE run_id=?1 AND deleted=0 ORDER BY id");
    s.bind(1, run_id);
    std::vector<PersonaSkeleton> out;
    while (s.step()) {
        PersonaSkeleton k;
        k.id = s.text(0);
        k.age = static_cast<int>(s.integer(1));
        k.gender = s.text(2);
        k.race = s.text(3);
        k.education = s.text(4);
        k.occupation = s.text(5);
        k.workclass = s.text(6);
        k.country = s.text(7);
        k.income_bracket = s.text(8);
        k.capital_gain = s.integer(9);
        k.capital_loss = s.integer(10);
        out.push_back(std::move(k));
    }
    return out;
}

void Store::put_persona(const std::string& run_id, const PersonaProfile& p) {
    std::lock_guard lk(impl_->mu);
    Impl::Stmt st(impl_->db,
                  "INSERT INTO persona(run_id,id,skeleton_id,text,strategy,detail_level,"
                  "source,word_count,template_hash,substandard,age) "
                  "VALUES(?1,?2,?3,?4,?5,?6,?7,?8,?9,?10,?11)");
    st.bind(1, run_id).bind(2, p.id);
    if (p.skeleton_id) st.bind(3, *p.skeleton_id);
    else st.bind_null(3);
    st.bind(4, p.text)
        .bind(5, to_string(p.strategy))
        .bind(6, to_string(p.detail_level))
        .bind(7, to_string(p.source))
        .bind(8, static_cast<long long>(p.word_cnt))
        .bind(9, p.template_hash)
        .bind(10, static_cast<long long>(p.substandard ? 1 : 0));
    if (p.age) st.bind(11, static_cast<long long>(*p.age));
    else st.bind_null(11);
    st.step();
}

std::vector<PersonaProfile> Store::personas(const std::string& run_id) const {
    std::lock_guard lk(impl_->mu);
    Impl::Stmt s(impl_->db,
                 "SELECT id,skeleton_id,text,strategy,detail_level,source,word_count,"
                 "template_hash,substandard,age FROM persona "
                 "WHERE run_id=?1 AND deleted=0 ORDER BY id");
    s.bind(1, run_id);
    std::vector<PersonaProfile> out;
    while (s.step()) {
        PersonaProfile p;
        p.id = s.text(0);
        if (!s.is_null(1)) p.skeleton_id = s.text(1);
        p.text = s.text(2);
        p.strategy = strategy_from_string(s.text(3));
        p.detail_level = detail_from_string(s.text(4));
        p.source = source_from_string(s.text(5));
        p.word_cnt = static_cast<std::size_t>(s.integer(6));
        p.template_hash = s.text(7);
        p.substandard = s.integer(8) != 0;
        if (!s.is_null(9)) p.age = static_cast<int>(s.integer(9));
        out.push_back(std::move(p));
    }
    return out;
}

std::optional<PersonaProfile> Store::persona(const std::string& run_id,
                                             const std::string& persona_id) const {
    for (auto& p : personas(run_id))
        if (p.id == persona_id) return p;
    return std::nullopt;
}

void Store::put_assessment(const std::string& run_id, const AssessmentOutcome& outcome,
                           std::uint64_t seed) {
    if (!outcome.ok) throw ValidationError("put_assessment: outcome not ok");
    std::lock_guard lk(impl_->mu);
    impl_->exec("BEGIN");
    try {
        for (const auto& ex : outcome.sheets) {
            Impl::Stmt st(impl_->db,
                          "INSERT INTO sheet_answer(assessment_id,run_id,persona_id,"
                          "sheet_index,raw_text,attempts) VALUES(?1,?2,?3,?4,?5,?6)");
            st.bind(1, outcome.assessment_id)
                .bind(2, run_id)
                .bind(3, outcome.persona_id)
                .bind(4, static_cast<long long>(ex.sheet_index))
                .bind(5, ex.raw_text)
                .bind(6, static_cast<long long>(ex.attempts));
            st.step();
        }
        for (const auto& r : outcome.responses) {
            Impl::Stmt st(impl_->db,
                          "INSERT INTO question_answer(assessment_id,item_id,choice,rationale) "
                          "VALUES(?1,?2,?3,?4)");
            st.bind(1, outcome.assessment_id)
                .bind(2, static_cast<long long>(r.item_id))
                .bind(3, static_cast<long long>(r.choice))
                .bind(4, r.rationale);
            st.step();
        }
        nlohmann::json facets = nlohmann::json::array();
        for (double f : outcome.scores.facets) facets.push_back(f);
        Impl::Stmt st(impl_->db,
                      "INSERT INTO personality(assessment_id,run_id,persona_id,seed,"
                      "n_raw,e_raw,o_raw,a_raw,c_raw,n_res,e_res,o_res,a_res,c_res,"
                      "facets) "
                      "VALUES(?1,?2,?3,?4,?5,?6,?7,?8,?9,?10,?11,?12,?13,?14,?15)");
        st.bind(1, outcome.assessment_id)
            .bind(2, run_id)
            .bind(3, outcome.persona_id)
            .bind(4, static_cast<long long>(seed));
        const auto& raw = outcome.scores.raw;
        const auto& res = outcome.scores.rescaled;
        st.bind(5, raw[Domain::N])
            .bind(6, raw[Domain::E])
            .bind(7, raw[Domain::O])
            .bind(8, raw[Domain::A])
            .bind(9, raw[Domain::C])
            .bind(10, res[Domain::N])
            .bind(11, res[Domain::E])
            .bind(12, res[Domain::O])
            .bind(13, res[Domain::A])
            .bind(14, res[Domain::C])
            .bind(15, facets.dump());
        st.step();
        impl_->exec("COMMIT");
    } catch (...) {
        impl_->exec("ROLLBACK");
        throw;
    }
}

void Store::put_failure(const std::string& run_id, const AssessmentOutcome& outcome) {
    if (outcome.ok) throw ValidationError("put_failure: outcome is ok");
    std::lock_guard lk(impl_->mu);
    Impl::Stmt st(impl_->db,
                  "INSERT OR REPLACE INTO assessment_failure(assessment_id,run_id,persona_id,"
                  "sheet_index,reason,created_at) VALUES(?1,?2,?3,?4,?5,?6)");
    st.bind(1, outcome.assessment_id).bind(2, run_id).bind(3, outcome.persona_id);
    if (outcome.failed_sheet >= 0) st.bind(4, static_cast<long long>(outcome.failed_sheet));
    else st.bind_null(4);
    st.bind(5, outcome.failure).bind(6, iso8601_now());
    st.step();
}

bool Store::has_personality(const std::string& assessment_id) const {
    std::lock_guard lk(impl_->mu);
    Impl::Stmt s(impl_->db, "SELECT 1 FROM personality WHERE assessment_id=?1");
    s.bind(1, assessment_id);
    return s.step();
}

std::vector<AssessmentRecord> Store::personalities(const std::string& run_id) const {
    return personalities_for_persona(run_id, "");
}

std::vector<AssessmentRecord> Store::personalities_for_persona(
    const std::string& run_id, const std::string& persona_id) const {
    // Record timestamps report the run's creation time; per-row wall-clock
    // would break byte-identical reruns in mock mode.
    std::string run_created;
    if (auto run = get_run(run_id)) run_created = run->created_at;
    std::lock_guard lk(impl_->mu);
    std::string sql =
        "SELECT assessment_id,persona_id,run_id,n_raw,e_raw,o_raw,a_raw,c_raw,"
        "n_res,e_res,o_res,a_res,c_res,facets FROM personality "
        "WHERE run_id=?1";
    if (!persona_id.empty()) sql += " AND persona_id=?2";
    sql += " ORDER BY assessment_id";
    Impl::Stmt s(impl_->db, sql);
    s.bind(1, run_id);
    if (!persona_id.empty()) s.bind(2, persona_id);
    std::vector<AssessmentRecord> out;
    while (s.step()) {
        AssessmentRecord r;
        r.assessment_id = s.text(0);
        r.persona_id = s.text(1);
        r.run_id = s.text(2);
        r.raw.scale = ScoreScale::raw;
        r.rescaled.scale = ScoreScale::rescaled;
        r.raw[Domain::N] = s.real(3);
        r.raw[Domain::E] = s.real(4);
        r.raw[Domain::O] = s.real(5);
        r.raw[Domain::A] = s.real(6);
        r.raw[Domain::C] = s.real(7);
        r.rescaled[Domain::N] = s.real(8);
        r.rescaled[Domain::E] = s.real(9);
        r.rescaled[Domain::O] = s.real(10);
        r.rescaled[Domain::A] = s.real(11);
        r.rescaled[Domain::C] = s.real(12);
        auto facets = nlohmann::json::parse(s.text(13));
        for (std::size_t i = 0; i < 30 && i < facets.size(); ++i)
            r.facets[i] = facets[i].get<double>();
        r.created_at = run_created;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ItemResponse> Store::question_answers(const std::string& assessment_id) const {
    std::lock_guard lk(impl_->mu);
    Impl::Stmt s(impl_->db,
                 "SELECT item_id,choice,rationale FROM question_answer "
                 "WHERE assessment_id=?1 ORDER BY item_id");
    s.bind(1, assessment_id);
    std::vector<ItemResponse> out;
    while (s.step()) {
        ItemResponse r;
        r.item_id = static_cast<int>(s.integer(0));
        r.choice = static_cast<int>(s.integer(1));
        r.rationale = s.text(2);
        out.push_back(std::move(r));
    }
    return out;
}

int Store::failure_count(const std::string& run_id, const std::string& persona_id) const {
    std::lock_guard lk(impl_->mu);
    Impl::Stmt s(impl_->db,
                 "SELECT COUNT(*) FROM assessment_failure WHERE run_id=?1 AND persona_id=?2");
    s.bind(1, run_id).bind(2, persona_id);
    s.step();
    return static_cast<int>(s.integer(0));
}

std::vector<PendingWork> Store::resume(const std::string& run_id, int repeats) const {
    if (!get_run(run_id)) throw DataError("unknown run: " + run_id);
    std::vector<PendingWork> out;
    for (const auto& p : personas(run_id)) {
        PendingWork w;
        w.persona_id = p.id;
        w.failure_count = failure_count(run_id, p.id);
        for (int r = 0; r < repeats; ++r)
            if (!has_personality(assessment_id(run_id, p.id, r))) w.remaining_repeats.push_back(r);
        if (!w.remaining_repeats.empty()) out.push_back(std::move(w));
    }
    return out;
}

std::string Store::export_csv(const std::string& table) const {
    static const std::map<std::string, std::string> kQueries = {
        {"runs", "SELECT run_id,strategy,seed,config,created_at,status FROM runs "
                 "WHERE deleted=0 ORDER BY run_id"},
        {"skeleton", "SELECT run_id,id,age,gender,race,education,occupation,workclass,country,"
                     "income_bracket,capital_gain,capital_loss FROM skeleton WHERE deleted=0 "
                     "ORDER BY run_id,id"},
        {"persona", "SELECT run_id,id,skeleton_id,strategy,detail_level,source,word_count,"
                    "template_hash,substandard,age,text FROM persona WHERE deleted=0 "
                    "ORDER BY run_id,id"},
        {"sheet_answer", "SELECT assessment_id,run_id,persona_id,sheet_index,attempts,raw_text "
                         "FROM sheet_answer ORDER BY assessment_id,sheet_index"},
        {"question_answer", "SELECT assessment_id,item_id,choice,rationale FROM question_answer "
                            "ORDER BY assessment_id,item_id"},
        {"personality", "SELECT assessment_id,run_id,persona_id,seed,n_raw,e_raw,o_raw,a_raw,"
                        "c_raw,n_res,e_res,o_res,a_res,c_res,facets FROM personality "
                        "ORDER BY assessment_id"},
        {"assessment_failure", "SELECT assessment_id,run_id,persona_id,sheet_index,reason,"
                               "created_at FROM assessment_failure ORDER BY assessment_id"},
    };
    auto it = kQueries.find(table);
    if (it == kQueries.end()) throw ValidationError("unknown table: " + table);
    std::lock_guard lk(impl_->mu);
    Impl::Stmt s(impl_->db, it->second);
    std::string out;
    for (int c = 0; c < s.column_count(); ++c) out += (c ? "," : "") + s.column_name(c);
    out += "\n";
    while (s.step()) {
        for (int c = 0; c < s.column_count(); ++c)
            out += (c ? "," : "") + csv_escape(s.text(c));
        out += "\n";
    }
    return out;
}

}  // namespace persim
