// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Runs fully offline; criterion 10 drives the real HTTP client against a
// local emulator speaking the documented wire protocol.

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "persim/analytics.hpp"
#include "persim/assessment.hpp"
#include "persim/forge.hpp"
#include "persim/gateway.hpp"
#include "persim/mock_gateway.hpp"
#include "persim/pipeline.hpp"
#include "persim/store.hpp"
#include "persim/util.hpp"

// httplib (with OpenSSL enabled) leaks macros that collide with Eigen's
// internals; keep it after every Eigen-including header.
#include <httplib.h>
#include <json.hpp>

using namespace persim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double elapsed_s) {
    std::printf("criterion %2d [%s]: %s (%.2fs)%s%s\n", id, name.c_str(),
                pass ? "PASS" : "FAIL", elapsed_s, detail.empty() ? "" : " - ",
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run_criterion(int id, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto [p, d] = body();
        pass = p;
        detail = d;
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, name, pass, detail, dt);
}

std::string source_dir() { return PERSIM_SOURCE_DIR; }
std::string data_path(const std::string& rel) { return source_dir() + "/data/" + rel; }

const ItemBank& bank() {
    static ItemBank b = load_item_bank(data_path("ipip_neo_120.tsv"));
    return b;
}
const TemplateSet& templates() {
    static TemplateSet t = TemplateSet::load(data_path("templates"));
    return t;
}

double unif01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double gauss(std::mt19937_64& rng) {
    double u1 = unif01(rng), u2 = unif01(rng);
    while (u1 <= 1e-300) u1 = unif01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

struct TempDir {
    fs::path dir;
    TempDir() {
        static int counter = 0;
        dir = fs::temp_directory_path() /
              ("persim_acc_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(dir);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string path(const std::string& n) const { return (dir / n).string(); }
};

// ---------------------------------------------------------------------------
// criterion 1: Table-4 algebra
std::pair<bool, std::string> table4_algebra() {
    struct Row {
        const char* name;
        std::array<double, 5> per_trait;
        double total;
    };
    const Row rows[] = {
        {"standard", {32.23, 21.05, 28.74, 34.48, 37.92}, 70.25},
        {"antialign", {26.50, 24.39, 30.80, 29.16, 30.50}, 63.45},
        {"narrative", {9.98, 30.80, 11.92, 27.55, 25.95}, 51.21},
        {"wikifiction", {4.85, 13.77, 11.07, 13.23, 7.28}, 23.75},
    };
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::ostringstream detail;
    for (const auto& r : rows) {
        double got = total_curve_distance(r.per_trait);
        if (std::abs(got - r.total) > 0.05) ok = false;
        detail << r.name << "=" << got << " ";
    }
    double us =
        std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    if (us > 1000.0) ok = false;
    detail << "(" << us << "us)";
    return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// criterion 2: scoring vs an independent brute-force oracle
// The oracle reads the keying table with its own parser and walks items one
// at a time in plain integers.
struct OracleItem {
    int domain;  // 0..4 instrument order N,E,O,A,C
    int facet;   // 1..6
    bool plus;
};
std::vector<OracleItem> oracle_bank() {
    std::ifstream f(data_path("ipip_neo_120.tsv"));
    std::vector<OracleItem> items(121);
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("item_id", 0) == 0) continue;
        std::istringstream ss(line);
        std::string id, dom, facet, key;
        std::getline(ss, id, '\t');
        std::getline(ss, dom, '\t');
        std::getline(ss, facet, '\t');
        std::getline(ss, key, '\t');
        int idx = std::stoi(id);
        static const std::string order = "NEOAC";
        items[static_cast<std::size_t>(idx)] = {static_cast<int>(order.find(dom[0])),
                                                std::stoi(facet), key == "plus"};
    }
    return items;
}

std::pair<bool, std::string> scoring_oracle() {
    auto oracle = oracle_bank();
    std::mt19937_64 rng(20260810);
    auto t0 = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<ItemResponse> responses;
        int facets[30] = {0};
        for (int id = 1; id <= 120; ++id) {
            int choice = static_cast<int>(rng() % 5) + 1;
            responses.push_back({id, choice, ""});
            const auto& it = oracle[static_cast<std::size_t>(id)];
            facets[it.domain * 6 + it.facet - 1] += it.plus ? choice : 6 - choice;
        }
        auto scored = score_responses(responses, bank());
        for (int fct = 0; fct < 30; ++fct)
            if (static_cast<long>(scored.facets[fct]) != facets[fct] ||
                scored.facets[fct] != std::floor(scored.facets[fct]))
                return {false, "facet mismatch at trial " + std::to_string(trial)};
        for (int d = 0; d < 5; ++d) {
            int dom = 0;
            for (int fct = 0; fct < 6; ++fct) dom += facets[d * 6 + fct];
            if (static_cast<long>(scored.raw.values[static_cast<std::size_t>(d)]) != dom)
                return {false, "domain mismatch at trial " + std::to_string(trial)};
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {secs < 1.0, "1000 sheets exact, " + std::to_string(secs) + "s"};
}

// ---------------------------------------------------------------------------
// criterion 3: Mahalanobis factorization vs explicit inverse
std::vector<std::vector<double>> gj_invert(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        double p = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] /= p;
            inv[col][c] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col];
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

std::pair<bool, std::string> mahalanobis_oracle() {
    std::mt19937_64 rng(77);
    double worst = 0;
    for (int trial = 0; trial < 500; ++trial) {
        Eigen::MatrixXd a(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) a(i, j) = gauss(rng);
        Eigen::MatrixXd cov = a.transpose() * a + 0.5 * Eigen::MatrixXd::Identity(5, 5);
        Eigen::VectorXd mu(5), x(5);
        for (int i = 0; i < 5; ++i) {
            mu[i] = gauss(rng);
            x[i] = 2.0 * gauss(rng);
        }
        double got = mahalanobis(x, mu, cov);
        std::vector<std::vector<double>> c(5, std::vector<double>(5));
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cov(i, j);
        auto inv = gj_invert(c);
        double acc = 0;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                acc += (x[i] - mu[i]) *
                       inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                       (x[j] - mu[j]);
        worst = std::max(worst, std::abs(got - std::sqrt(acc)));
    }
    std::ostringstream d;
    d << "500 SPD matrices, worst |diff| = " << worst;
    return {worst <= 1e-9, d.str()};
}

// ---------------------------------------------------------------------------
// criterion 4: ARI exhaustive oracle
double ari_pairs(const std::vector<int>& la, const std::vector<int>& lb) {
    long long a = 0, b = 0, c = 0, d = 0;
    for (std::size_t i = 0; i < la.size(); ++i)
        for (std::size_t j = i + 1; j < la.size(); ++j) {
            bool sa = la[i] == la[j], sb = lb[i] == lb[j];
            if (sa && sb) ++a;
            else if (sa) ++b;
            else if (sb) ++c;
            else ++d;
        }
    long long denom = (a + b) * (b + d) + (a + c) * (c + d);
    if (denom == 0) return 1.0;
    return 2.0 * static_cast<double>(a * d - b * c) / static_cast<double>(denom);
}

std::pair<bool, std::string> ari_oracle() {
    double hand = adjusted_rand_index(std::vector<int>{0, 0, 1, 1}, std::vector<int>{0, 1, 0, 1});
    if (hand != -0.5) return {false, "hand case returned " + std::to_string(hand)};

    long long checked = 0;
    double worst = 0;
    for (int n = 2; n <= 8; ++n) {
        int total = 1;
        for (int i = 0; i < n; ++i) total *= 3;
        std::vector<int> la(static_cast<std::size_t>(n)), lb(static_cast<std::size_t>(n));
        for (int code_a = 0; code_a < total; ++code_a) {
            int ca = code_a;
            for (int i = 0; i < n; ++i) {
                la[static_cast<std::size_t>(i)] = ca % 3;
                ca /= 3;
            }
            for (int code_b = 0; code_b < total; ++code_b) {
                int cb = code_b;
                for (int i = 0; i < n; ++i) {
                    lb[static_cast<std::size_t>(i)] = cb % 3;
                    cb /= 3;
                }
                double got = adjusted_rand_index(la, lb);
                double want = ari_pairs(la, lb);
                worst = std::max(worst, std::abs(got - want));
                ++checked;
            }
        }
    }
    std::ostringstream d;
    d << checked << " label pairs, worst |diff| = " << worst << ", hand case exact";
    return {worst <= 1e-12, d.str()};
}

// ---------------------------------------------------------------------------
// in-memory assessment harness shared by criteria 5 and 6
PersonaProfile twin(const std::string& skeleton, DetailLevel detail) {
    PersonaProfile p;
    p.id = skeleton + (detail == DetailLevel::poor ? "-poor" : "-std");
    p.skeleton_id = skeleton;
    p.detail_level = detail;
    p.strategy = detail == DetailLevel::poor ? Strategy::poor : Strategy::standard;
    p.text = detail == DetailLevel::poor
                 ? "You are a person described only by a few demographic facts."
                 : "You are a person with a long, detailed and realistic profile "
                   "covering lifestyle, relationships, appearance and work.";
    p.word_cnt = word_count(p.text);
    return p;
}

TraitVector latent_raw(std::array<int, 5> raw) {
    TraitVector v;
    v.scale = ScoreScale::rescaled;
    for (int d = 0; d < 5; ++d)
        v.values[static_cast<std::size_t>(d)] = rescale(raw[static_cast<std::size_t>(d)]);
    return v;
}

// n assessments of one profile under one seed; returns n x 5 rescaled rows.
Eigen::MatrixXd assess_block(MockGateway& gw, const PersonaProfile& profile,
                             std::uint64_t seed, int n) {
    Eigen::MatrixXd out(n, 5);
    for (int i = 0; i < n; ++i) {
        auto outcome = run_assessment(gw, templates(), bank(), profile, false,
                                      profile.id + "/r" + std::to_string(i),
                                      combine_seed(combine_seed(seed, profile.id),
                                                   static_cast<std::uint64_t>(i)));
        if (!outcome.ok) throw std::runtime_error("mock assessment failed unexpectedly");
        for (int d = 0; d < 5; ++d)
            out(i, d) = outcome.scores.rescaled.values[static_cast<std::size_t>(d)];
    }
    return out;
}

// criterion 5: convergence ordering under sigma(poor)=0.8, sigma(standard)=0.4
std::pair<bool, std::string> convergence_mock() {
    const std::array<std::array<int, 5>, 5> latents = {{{60, 70, 80, 90, 75},
                                                        {65, 85, 72, 60, 78},
                                                        {70, 62, 88, 74, 66},
                                                        {58, 76, 64, 82, 70},
                                                        {72, 68, 78, 66, 84}}};
    MockGatewayConfig cfg;
    cfg.sigma_poor = 0.8;
    cfg.sigma_standard = 0.4;
    for (int p = 0; p < 5; ++p)
        cfg.latent_overrides["sk:cv-" + std::to_string(p)] =
            latent_raw(latents[static_cast<std::size_t>(p)]);
    MockGateway gw(cfg, bank());

    const int kSeeds = 20, kRepeats = 300;
    std::array<std::vector<double>, 5> cv_poor, cv_std;
    std::size_t kept_min = 300, kept_max = 0;
    std::mutex mu;
    std::atomic<bool> failed{false};
    std::atomic<int> next{0};
    const int tasks = 5 * kSeeds;

    auto worker = [&] {
        for (;;) {
            int t = next.fetch_add(1);
            if (t >= tasks || failed.load()) return;
            int p = t / kSeeds, seed = t % kSeeds;
            try {
                std::string sk = "cv-" + std::to_string(p);
                auto poor = assess_block(gw, twin(sk, DetailLevel::poor),
                                         1000 + static_cast<std::uint64_t>(seed) * 31, kRepeats);
                auto stnd = assess_block(gw, twin(sk, DetailLevel::standard),
                                         1000 + static_cast<std::uint64_t>(seed) * 31, kRepeats);
                auto rp = stability_report(sk, "poor", poor, CvMode::scores);
                auto rs = stability_report(sk, "standard", stnd, CvMode::scores);
                std::lock_guard lk(mu);
                cv_poor[static_cast<std::size_t>(p)].push_back(rp.cv);
                cv_std[static_cast<std::size_t>(p)].push_back(rs.cv);
                kept_min = std::min({kept_min, rp.n_kept, rs.n_kept});
                kept_max = std::max({kept_max, rp.n_kept, rs.n_kept});
            } catch (...) {
                failed.store(true);
                return;
            }
        }
    };
    unsigned hw = std::max(2u, std::min(8u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < hw; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failed.load()) return {false, "assessment harness failed"};

    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    bool order_ok = true;
    std::ostringstream d;
    d.precision(4);
    for (int p = 0; p < 5; ++p) {
        double mp = median(cv_poor[static_cast<std::size_t>(p)]);
        double ms = median(cv_std[static_cast<std::size_t>(p)]);
        if (!(mp > ms)) order_ok = false;
        d << "p" << p + 1 << ":" << mp << ">" << ms << " ";
    }
    bool kept_ok = kept_min >= 270 && kept_max <= 300;
    d << "kept=[" << kept_min << "," << kept_max << "]";
    return {order_ok && kept_ok, d.str()};
}

// criterion 6: marginal-utility configuration and ARI contrasts
std::pair<bool, std::string> marginal_utility_mock() {
    const double sigma_poor = 5.0, sigma_std = 1.0;
    // Ring latents: far gaps of 24 raw points on distinct dimensions, one
    // close pair (4-5) separated by 5 raw points.
    std::array<std::array<int, 5>, 5> raw{};
    raw[0] = {72, 72, 72, 72, 72};
    raw[1] = raw[0];
    raw[1][2] += 24;  // O
    raw[2] = raw[1];
    raw[2][4] += 24;  // C
    raw[3] = raw[2];
    raw[3][1] += 24;  // E
    raw[4] = raw[3];
    raw[4][3] += 5;  // A: the close pair

    // Stated gap thresholds, in rescaled units.
    const double close_gap = rescale(24 + 5) - rescale(24);  // 5 raw points
    const double far_gap = rescale(24 + 24) - rescale(24);   // 24 raw points
    if (!(close_gap < 2 * sigma_poor) || !(far_gap > 4 * sigma_poor))
        return {false, "configured gaps violate the stated thresholds"};

    MockGatewayConfig cfg;
    cfg.sigma_poor = sigma_poor;
    cfg.sigma_standard = sigma_std;
    for (int p = 0; p < 5; ++p)
        cfg.latent_overrides["sk:mu-" + std::to_string(p)] =
            latent_raw(raw[static_cast<std::size_t>(p)]);
    MockGateway gw(cfg, bank());

    auto blocks = [&](DetailLevel detail) {
        std::vector<Eigen::MatrixXd> out;
        for (int p = 0; p < 5; ++p)
            out.push_back(assess_block(gw, twin("mu-" + std::to_string(p), detail),
                                       7000 + static_cast<std::uint64_t>(p), 300));
        return out;
    };
    auto poor = blocks(DetailLevel::poor);
    auto stnd = blocks(DetailLevel::standard);

    const std::array<std::pair<int, int>, 5> ring{{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}};
    std::array<double, 5> ari_poor{}, ari_std{};
    for (std::size_t i = 0; i < ring.size(); ++i) {
        auto [a, b] = ring[i];
        ari_poor[i] = identify_pair("a", poor[static_cast<std::size_t>(a)], "b",
                                    poor[static_cast<std::size_t>(b)], 11, true)
                          .ari;
        ari_std[i] = identify_pair("a", stnd[static_cast<std::size_t>(a)], "b",
                                   stnd[static_cast<std::size_t>(b)], 11, true)
                         .ari;
    }
    std::vector<std::string> ids{"p1", "p2", "p3", "p4", "p5"};
    double group_poor = identify_group(ids, poor, 13, true).ari;
    double group_std = identify_group(ids, stnd, 13, true).ari;

    bool ok = true;
    std::ostringstream d;
    d.precision(4);
    // Pair 4-5 (ring index 3) is the close pair.
    if (!(ari_poor[3] < 0.3)) ok = false;
    if (!(ari_std[3] > 0.85)) ok = false;
    double far_min = 1.0;
    for (std::size_t i = 0; i < 5; ++i) {
        if (i == 3) continue;
        far_min = std::min({far_min, ari_poor[i], ari_std[i]});
        if (!(ari_poor[i] > 0.9) || !(ari_std[i] > 0.9)) ok = false;
    }
    if (!(group_std > group_poor)) ok = false;
    d << "close ARI poor/std = " << ari_poor[3] << "/" << ari_std[3]
      << ", far min = " << far_min << ", grouped = " << group_poor << " < " << group_std;
    return {ok, d.str()};
}

// ---------------------------------------------------------------------------
// criterion 7: curve identity and uniform offset
std::pair<bool, std::string> curve_identity_offset() {
    auto baseline = load_baseline(data_path("human_baseline.csv"));
    // Identity: synthetic records placed exactly at the baseline means.
    std::vector<std::pair<int, TraitVector>> aged;
    const auto& edges = baseline.bin_edges();
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
        int age = static_cast<int>((edges[b] + edges[b + 1]) / 2);
        TraitVector v;
        for (Domain dm : kDomains) v[dm] = baseline.curve(dm).values[b];
        aged.push_back({age, v});
    }
    auto curves = build_curves(aged, edges);
    auto cmp = compare_to_baseline("identity", curves, baseline);
    bool identity_ok = cmp.total == 0.0;

    // Offset: ten bins, every trait 2.0 above the reference.
    PersonalityCurve ref;
    ref.trait = Domain::N;
    for (int b = 0; b <= 10; ++b) ref.bin_edges.push_back(15 + 6 * b);
    ref.values.assign(10, 50.0);
    ref.counts.assign(10, 1);
    PersonalityCurve shifted = ref;
    for (auto& v : shifted.values) v += 2.0;
    double per_trait = curve_distance(shifted, ref);
    bool per_ok = std::abs(per_trait - 6.32456) <= 1e-5;  // 2*sqrt(10), stated +-1e-6 on exact
    bool exact_ok = std::abs(per_trait - 2.0 * std::sqrt(10.0)) <= 1e-6;
    std::array<double, 5> five;
    five.fill(per_trait);
    double total = total_curve_distance(five);
    bool total_ok = std::abs(total - 14.1421) <= 1e-4;  // 2*sqrt(50)

    std::ostringstream d;
    d << "identity total = " << cmp.total << ", offset per-trait = " << per_trait
      << ", total = " << total;
    return {identity_ok && per_ok && exact_ok && total_ok, d.str()};
}

// ---------------------------------------------------------------------------
// criterion 8: numerical hygiene
std::pair<bool, std::string> numerical_hygiene() {
    std::mt19937_64 rng(88);
    bool ok = true;
    std::ostringstream d;

    std::vector<double> xs(400);
    for (auto& x : xs) x = 5 + 2 * gauss(rng);
    auto curve = kde(xs);
    double integral = 0;
    for (std::size_t i = 1; i < curve.grid.size(); ++i)
        integral += 0.5 * (curve.density[i] + curve.density[i - 1]) *
                    (curve.grid[i] - curve.grid[i - 1]);
    if (std::abs(integral - 1.0) > 1e-3) ok = false;
    d << "kde integral = " << integral;

    Eigen::MatrixXd pts(200, 5);
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 5; ++j) pts(i, j) = gauss(rng) * (j + 1);
    auto ratios = pca_explained(pts);
    double sum = 0;
    for (double r : ratios) sum += r;
    if (std::abs(sum - 1.0) > 1e-9) ok = false;
    for (std::size_t i = 1; i < ratios.size(); ++i)
        if (ratios[i] > ratios[i - 1] + 1e-12) ok = false;
    d << ", pca sum = " << sum;

    auto km = kmeans(pts, 3, 5);
    for (std::size_t i = 1; i < km.sse_trace.size(); ++i)
        if (km.sse_trace[i] > km.sse_trace[i - 1] + 1e-9) ok = false;
    d << ", sse iters = " << km.sse_trace.size();

    auto cov = covariance(pts);
    double asym = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) asym = std::max(asym, std::abs(cov(i, j) - cov(j, i)));
    if (asym > 1e-12) ok = false;
    d << ", cov asymmetry = " << asym;
    return {ok, d.str()};
}

// ---------------------------------------------------------------------------
// criterion 9: full Type I determinism through the store
std::pair<bool, std::string> pipeline_determinism() {
    auto run_once = [&](const TempDir& tmp) {
        PipelineConfig cfg;
        cfg.store_path = tmp.path("p.db");
        cfg.item_bank_path = data_path("ipip_neo_120.tsv");
        cfg.templates_dir = data_path("templates");
        cfg.reports_dir = tmp.path("reports");
        cfg.provider.kind = "mock";
        Pipeline p(cfg);
        p.cmd_sample("r1", data_path("adult_sample.csv"), 3, "", 42, 0);
        p.cmd_forge("r1", Strategy::standard, 42);
        p.cmd_forge_poor("r1", "r1");
        p.cmd_assess("r1", 300, false, 42, 4);
        auto reports = p.cmd_eval_stability("r1", CvMode::scores);
        p.write_stability_reports("r1", reports);
        return std::pair<std::string, std::string>(
            p.store().export_csv("personality"),
            read_file(tmp.path("reports") + "/r1/stability.csv"));
    };
    TempDir t1, t2;
    auto [table1, report1] = run_once(t1);
    auto [table2, report2] = run_once(t2);
    bool tables = table1 == table2;
    bool reports = report1 == report2;
    std::ostringstream d;
    d << "personality tables " << (tables ? "identical" : "differ") << " ("
      << std::count(table1.begin(), table1.end(), '\n') - 1 << " rows), reports "
      << (reports ? "identical" : "differ");
    return {tables && reports, d.str()};
}

// ---------------------------------------------------------------------------
// criterion 10: live-mode structural smoke against a local wire emulator
std::pair<bool, std::string> live_structural_smoke() {
    // Provider emulator: answers sheet prompts from the prompt text alone and
    // forge prompts with a filler profile; injects one transient 500 per
    // seven requests to exercise the retry path.
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions", [&](const httplib::Request& q, httplib::Response& s) {
        int n = hits.fetch_add(1);
        if (n % 7 == 6) {
            s.status = 500;
            s.set_content("transient", "text/plain");
            return;
        }
        auto j = nlohmann::json::parse(q.body);
        std::string user = j["messages"][1]["content"];
        std::ostringstream reply;
        bool sheet = false;
        for (const auto& line : split(user, '\n')) {
            auto t = trim(line);
            if (t.size() > 2 && t[0] == 'Q' && std::isdigit(static_cast<unsigned char>(t[1]))) {
                std::size_t pos = 1;
                while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
                if (pos < t.size() && t[pos] == '.') {
                    sheet = true;
                    int id = std::stoi(t.substr(1, pos - 1));
                    int choice = 1 + static_cast<int>(fnv1a64(t) % 5);
                    reply << "Q" << id << ": " << choice << " - it fits me\n";
                }
            }
        }
        if (!sheet) {
            reply << "You are the person described by these facts.\n";
            for (const auto& line : split(user, '\n')) {
                auto t = trim(line);
                if (t.rfind("- ", 0) == 0) reply << t << "\n";
            }
            for (int w = 0; w < 320; ++w) reply << " steady";
            reply << ".\n";
        }
        nlohmann::json out{
            {"choices", {{{"message", {{"role", "assistant"}, {"content", reply.str()}}}}}}};
        s.set_content(out.dump(), "application/json");
    });
    int port = 0;
    std::thread th([&] {
        port = server.bind_to_any_port("127.0.0.1");
        server.listen_after_bind();
    });
    while (!server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(5));

    TempDir tmp;
    PipelineConfig cfg;
    cfg.store_path = tmp.path("live.db");
    cfg.item_bank_path = data_path("ipip_neo_120.tsv");
    cfg.templates_dir = data_path("templates");
    cfg.reports_dir = tmp.path("reports");
    cfg.provider.kind = "http";
    cfg.provider.base_url = "http://127.0.0.1:" + std::to_string(port);
    cfg.provider.model = "emulated";
    cfg.provider.backoff_base_ms = 1;
    cfg.provider.timeout_s = 10;

    std::size_t scored = 0, requested = 10;
    {
        Pipeline p(cfg);
        p.cmd_sample("smoke", data_path("adult_sample.csv"), 10, "", 5, 0);
        p.cmd_forge("smoke", Strategy::standard, 5);
        auto stats = p.cmd_assess("smoke", 1, false, 5, 4);
        scored = stats.completed;
        requested = stats.requested;
    }
    server.stop();
    th.join();

    double rate = static_cast<double>(scored) / static_cast<double>(requested);
    std::ostringstream d;
    d << scored << "/" << requested << " assessments parsed and scored over HTTP ("
      << hits.load() << " provider calls)";
    return {rate >= 0.98, d.str()};
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    run_criterion(1, "table-4 algebra", table4_algebra);
    run_criterion(2, "scoring oracle", scoring_oracle);
    run_criterion(3, "mahalanobis oracle", mahalanobis_oracle);
    run_criterion(4, "ARI oracle", ari_oracle);
    run_criterion(5, "convergence phenomenon", convergence_mock);
    run_criterion(6, "marginal-utility phenomenon", marginal_utility_mock);
    run_criterion(7, "curve identity and offset", curve_identity_offset);
    run_criterion(8, "numerical hygiene", numerical_hygiene);
    run_criterion(9, "pipeline determinism", pipeline_determinism);
    run_criterion(10, "live-mode structural smoke", live_structural_smoke);
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", g_failures);
    return 1;
}
