#include "persim/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "persim/util.hpp"

namespace persim {

namespace {

double mean_of(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
    double m = mean_of(xs);
    double acc = 0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / (static_cast<double>(xs.size()) - 1.0));
}

}  // namespace

Eigen::MatrixXd covariance(const Eigen::MatrixXd& samples) {
    const auto n = samples.rows();
    if (n < 10) throw ValidationError("covariance: need n >= 10, got " + std::to_string(n));
    Eigen::RowVectorXd mean = samples.colwise().mean();
    Eigen::MatrixXd centered = samples.rowwise() - mean;
    Eigen::MatrixXd cov =
        (centered.adjoint() * centered) / static_cast<double>(n - 1);
    cov = ((cov + cov.transpose()) / 2.0).eval();  // enforce exact symmetry
    double lambda = 1e-6 * cov.diagonal().mean();
    cov += lambda * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
    return cov;
}

double mahalanobis(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                   const Eigen::MatrixXd& cov) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw ValidationError("mahalanobis: covariance not positive definite");
    Eigen::VectorXd d = x - mean;
    // L y = d, distance^2 = y^T y; no explicit inverse.
    Eigen::VectorXd y = llt.matrixL().solve(d);
    return y.norm();
}

std::vector<double> mahalanobis_all(const Eigen::MatrixXd& samples, const Eigen::VectorXd& mean,
                                    const Eigen::MatrixXd& cov) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw ValidationError("mahalanobis: covariance not positive definite");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(samples.rows()));
    for (Eigen::Index i = 0; i < samples.rows(); ++i) {
        Eigen::VectorXd d = samples.row(i).transpose() - mean;
        out.push_back(llt.matrixL().solve(d).norm());
    }
    return out;
}

std::vector<std::size_t> filter_outliers(const std::vector<double>& distances) {
    if (distances.size() < 10)
        throw ValidationError("filter_outliers: need n >= 10");
    std::vector<std::size_t> kept;
    kept.reserve(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i)
        if (distances[i] * distances[i] <= kChiSq5Q995) kept.push_back(i);
    return kept;
}

double coefficient_of_variation(std::span<const double> xs) {
    if (xs.size() < 2) throw ValidationError("cv: need at least 2 values");
    double m = mean_of(xs);
    if (m <= 0) throw ValidationError("cv: mean must be positive");
    return sample_sd(xs) / m;
}

double excess_kurtosis(std::span<const double> xs) {
    if (xs.size() < 4) throw ValidationError("kurtosis: need n >= 4");
    double m = mean_of(xs);
    double m2 = 0, m4 = 0;
    for (double x : xs) {
        double d = x - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(xs.size());
    m4 /= static_cast<double>(xs.size());
    if (m2 <= 0) throw ValidationError("kurtosis: zero variance");
    return m4 / (m2 * m2) - 3.0;
}

KdeCurve kde(std::span<const double> xs) {
    if (xs.size() < 2) throw ValidationError("kde: need n >= 2");
    double sd = sample_sd(xs);
    if (sd <= 0) throw ValidationError("kde: zero variance");
    double h = 1.06 * sd * std::pow(static_cast<double>(xs.size()), -0.2);
    auto [mn_it, mx_it] = std::minmax_element(xs.begin(), xs.end());
    double lo = *mn_it - 3 * h, hi = *mx_it + 3 * h;
    constexpr int kGridPoints = 512;
    KdeCurve out;
    out.bandwidth = h;
    out.grid.resize(kGridPoints);
    out.density.resize(kGridPoints);
    const double step = (hi - lo) / (kGridPoints - 1);
    const double norm = 1.0 / (static_cast<double>(xs.size()) * h * std::sqrt(2.0 * M_PI));
    for (int g = 0; g < kGridPoints; ++g) {
        double x = lo + g * step;
        double acc = 0;
        for (double xi : xs) {
            double z = (x - xi) / h;
            acc += std::exp(-0.5 * z * z);
        }
        out.grid[g] = x;
        out.density[g] = acc * norm;
    }
    return out;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts) {
    const auto n = points.rows();
    if (k < 1) throw ValidationError("kmeans: k must be >= 1");
    if (n < k) throw ValidationError("kmeans: fewer points than clusters");

    KMeansResult best;
    best.sse = std::numeric_limits<double>::infinity();

    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(combine_seed(seed, static_cast<std::uint64_t>(r)));
        // k-means++ seeding
        Eigen::MatrixXd centroids(k, points.cols());
        std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
        centroids.row(0) = points.row(first(rng));
        Eigen::VectorXd d2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
        for (int c = 1; c < k; ++c) {
            double total = d2.sum();
            Eigen::Index pick = 0;
            if (total > 0) {
                double u = std::uniform_real_distribution<double>(0, total)(rng);
                double acc = 0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    acc += d2[i];
                    if (acc >= u) {
                        pick = i;
                        break;
                    }
                }
            } else {
                pick = first(rng);  // all points identical
            }
            centroids.row(c) = points.row(pick);
            d2 = d2.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
        }

        std::vector<int> assign(static_cast<std::size_t>(n), -1);
        std::vector<double> trace;
        bool changed = true;
        for (int iter = 0; iter < 200 && changed; ++iter) {
            changed = false;
            double sse = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                int bestc = 0;
                double bestd = (points.row(i) - centroids.row(0)).squaredNorm();
                for (int c = 1; c < k; ++c) {
                    double d = (points.row(i) - centroids.row(c)).squaredNorm();
                    if (d < bestd) {
                        bestd = d;
                        bestc = c;
                    }
                }
                if (assign[static_cast<std::size_t>(i)] != bestc) {
                    assign[static_cast<std::size_t>(i)] = bestc;
                    changed = true;
                }
                sse += bestd;
            }
            trace.push_back(sse);
            Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
            std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
            for (Eigen::Index i = 0; i < n; ++i) {
                sums.row(assign[static_cast<std::size_t>(i)]) += points.row(i);
                ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
            }
            for (int c = 0; c < k; ++c)
                if (counts[static_cast<std::size_t>(c)] > 0)
                    centroids.row(c) =
                        sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        }
        double sse = trace.empty() ? 0 : trace.back();
        if (sse < best.sse) {
            best.sse = sse;
            best.assignments = assign;
            best.centroids = centroids;
            best.sse_trace = std::move(trace);
        }
    }
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    for (int a : best.assignments) used[static_cast<std::size_t>(a)] = true;
    best.degenerate_clusters =
        static_cast<int>(std::count(used.begin(), used.end(), false));
    return best;
}

double adjusted_rand_index(std::span<const int> labels_a, std::span<const int> labels_b) {
    if (labels_a.size() != labels_b.size())
        throw ValidationError("ari: label length mismatch");
    const std::size_t n = labels_a.size();
    if (n < 2) throw ValidationError("ari: need n >= 2");

    // Compact both label sets to 0..k-1 and build a dense contingency table.
    std::map<int, int> ra, rb;
    for (std::size_t i = 0; i < n; ++i) {
        ra.emplace(labels_a[i], static_cast<int>(ra.size()));
        rb.emplace(labels_b[i], static_cast<int>(rb.size()));
    }
    const std::size_t ka = ra.size(), kb = rb.size();
    std::vector<long long> cells(ka * kb, 0), rows(ka, 0), cols(kb, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int x = ra[labels_a[i]], y = rb[labels_b[i]];
        ++cells[static_cast<std::size_t>(x) * kb + static_cast<std::size_t>(y)];
        ++rows[static_cast<std::size_t>(x)];
        ++cols[static_cast<std::size_t>(y)];
    }
    auto choose2 = [](long long m) { return m * (m - 1) / 2; };
    long long sij = 0, sa = 0, sb = 0;
    for (long long c : cells) sij += choose2(c);
    for (long long r : rows) sa += choose2(r);
    for (long long c : cols) sb += choose2(c);
    long long t = choose2(static_cast<long long>(n));

    // ARI = (sij - sa*sb/t) / ((sa+sb)/2 - sa*sb/t), cleared of fractions.
    // Integer form keeps small cases exact; t*sij ~ n^4/4 caps the integer
    // path near n = 50k, far beyond any clustering this pipeline runs.
    if (n <= 50000) {
        long long num = 2 * (t * sij - sa * sb);
        long long den = t * (sa + sb) - 2 * sa * sb;
        if (den == 0) return 1.0;  // both partitions trivial
        return static_cast<double>(num) / static_cast<double>(den);
    }
    double expected = static_cast<double>(sa) * static_cast<double>(sb) / static_cast<double>(t);
    double maximum = (static_cast<double>(sa) + static_cast<double>(sb)) / 2.0;
    if (maximum == expected) return 1.0;
    return (static_cast<double>(sij) - expected) / (maximum - expected);
}

double centroid_distance(const Eigen::MatrixXd& centroids) {
    if (centroids.rows() != 2)
        throw ValidationError("centroid_distance: defined for exactly 2 centroids");
    return (centroids.row(0) - centroids.row(1)).norm();
}

Eigen::VectorXd pooled_within_sd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    auto ss = [](const Eigen::MatrixXd& m) -> Eigen::RowVectorXd {
        Eigen::RowVectorXd mean = m.colwise().mean();
        return (m.rowwise() - mean).array().square().colwise().sum();
    };
    double dof = static_cast<double>(a.rows() + b.rows() - 2);
    Eigen::VectorXd pooled = ((ss(a) + ss(b)) / dof).transpose().array().sqrt();
    for (Eigen::Index i = 0; i < pooled.size(); ++i)
        if (pooled[i] <= 0) pooled[i] = 1.0;  // degenerate dimension: leave unscaled
    return pooled;
}

std::vector<double> pca_explained(const Eigen::MatrixXd& points) {
    if (points.rows() < 3) throw ValidationError("pca: need n >= 3");
    Eigen::RowVectorXd mean = points.colwise().mean();
    Eigen::MatrixXd centered = points.rowwise() - mean;
    Eigen::MatrixXd cov =
        (centered.adjoint() * centered) / static_cast<double>(points.rows() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) throw ValidationError("pca: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    double trace = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] < 0) ev[i] = 0;  // numerical noise on rank-deficient input
        trace += ev[i];
    }
    if (trace <= 0) throw ValidationError("pca: zero variance");
    std::vector<double> ratios;
    for (Eigen::Index i = ev.size() - 1; i >= 0; --i) ratios.push_back(ev[i] / trace);
    return ratios;
}

StabilityReport stability_report(const std::string& persona_id, const std::string& label,
                                 const Eigen::MatrixXd& traits, CvMode cv_mode) {
    StabilityReport rep;
    rep.persona_id = persona_id;
    rep.label = label;
    rep.n_raw = static_cast<std::size_t>(traits.rows());

    Eigen::VectorXd mean = traits.colwise().mean();
    Eigen::MatrixXd cov = covariance(traits);
    rep.mahalanobis_distances = mahalanobis_all(traits, mean, cov);
    auto kept = filter_outliers(rep.mahalanobis_distances);
    rep.n_kept = kept.size();

    std::vector<double> kept_d;
    kept_d.reserve(kept.size());
    Eigen::MatrixXd kept_rows(static_cast<Eigen::Index>(kept.size()), traits.cols());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        kept_d.push_back(rep.mahalanobis_distances[kept[i]]);
        kept_rows.row(static_cast<Eigen::Index>(i)) =
            traits.row(static_cast<Eigen::Index>(kept[i]));
    }

    if (cv_mode == CvMode::distances) {
        rep.cv = coefficient_of_variation(kept_d);
    } else {
        // Mean per-domain CV over kept rows.
        double acc = 0;
        for (Eigen::Index c = 0; c < kept_rows.cols(); ++c) {
            std::vector<double> col(kept_rows.col(c).data(),
                                    kept_rows.col(c).data() + kept_rows.rows());
            acc += coefficient_of_variation(col);
        }
        rep.cv = acc / static_cast<double>(kept_rows.cols());
    }
    rep.kurtosis = excess_kurtosis(kept_d);
    rep.kde_curve = kde(kept_d);
    rep.mean_traits.scale = ScoreScale::rescaled;
    Eigen::VectorXd kept_mean = kept_rows.colwise().mean();
    for (int d = 0; d < 5; ++d) rep.mean_traits.values[static_cast<std::size_t>(d)] = kept_mean[d];
    return rep;
}

namespace {

Eigen::MatrixXd standardize_rows(const Eigen::MatrixXd& m, const Eigen::VectorXd& sd) {
    Eigen::MatrixXd out = m;
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.col(c) /= sd[c];
    return out;
}

}  // namespace

IdentifiabilityReport identify_pair(const std::string& id_a, const Eigen::MatrixXd& a,
                                    const std::string& id_b, const Eigen::MatrixXd& b,
                                    std::uint64_t seed, bool standardized) {
    IdentifiabilityReport rep;
    rep.persona_ids = {id_a, id_b};
    rep.persona_count = 2;
    rep.sample_count = static_cast<std::size_t>(a.rows() + b.rows());
    rep.standardized = standardized;

    Eigen::MatrixXd pa = a, pb = b;
    if (standardized) {
        Eigen::VectorXd sd = pooled_within_sd(a, b);
        pa = standardize_rows(a, sd);
        pb = standardize_rows(b, sd);
    }
    Eigen::MatrixXd all(pa.rows() + pb.rows(), pa.cols());
    all << pa, pb;
    rep.true_labels.assign(rep.sample_count, 0);
    std::fill(rep.true_labels.begin() + pa.rows(), rep.true_labels.end(), 1);

    auto km = kmeans(all, 2, seed);
    rep.cluster_assignments = km.assignments;
    rep.ari = adjusted_rand_index(rep.true_labels, km.assignments);
    rep.centroid_dist = centroid_distance(km.centroids);
    rep.pca_explained = pca_explained(all);
    return rep;
}

IdentifiabilityReport identify_group(const std::vector<std::string>& ids,
                                     const std::vector<Eigen::MatrixXd>& groups,
                                     std::uint64_t seed, bool standardized) {
    if (ids.size() != groups.size() || groups.empty())
        throw ValidationError("identify_group: ids/groups mismatch");
    IdentifiabilityReport rep;
    rep.persona_ids = ids;
    rep.persona_count = groups.size();
    rep.standardized = standardized;

    Eigen::Index total = 0;
    for (const auto& g : groups) total += g.rows();
    Eigen::MatrixXd all(total, groups[0].cols());
    Eigen::Index at = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        all.middleRows(at, groups[g].rows()) = groups[g];
        for (Eigen::Index i = 0; i < groups[g].rows(); ++i)
            rep.true_labels.push_back(static_cast<int>(g));
        at += groups[g].rows();
    }
    rep.sample_count = static_cast<std::size_t>(total);

    if (standardized) {
        // Pooled within-group SD across all groups.
        Eigen::VectorXd ss = Eigen::VectorXd::Zero(all.cols());
        double dof = 0;
        for (const auto& g : groups) {
            Eigen::RowVectorXd mean = g.colwise().mean();
            ss += ((g.rowwise() - mean).array().square().colwise().sum()).matrix().transpose();
            dof += static_cast<double>(g.rows() - 1);
        }
        Eigen::VectorXd sd = (ss / dof).array().sqrt();
        for (Eigen::Index i = 0; i < sd.size(); ++i)
            if (sd[i] <= 0) sd[i] = 1.0;
        all = standardize_rows(all, sd);
    }

    auto km = kmeans(all, static_cast<int>(groups.size()), seed);
    rep.cluster_assignments = km.assignments;
    rep.ari = adjusted_rand_index(rep.true_labels, km.assignments);
    rep.pca_explained = pca_explained(all);
    return rep;
}

std::array<TraitDensityPair, 5> euclidean_density_per_trait(const Eigen::MatrixXd& a,
                                                            const Eigen::MatrixXd& b) {
    std::array<TraitDensityPair, 5> out;
    for (int d = 0; d < 5; ++d) {
        TraitDensityPair& pair = out[static_cast<std::size_t>(d)];
        pair.trait = static_cast<Domain>(d);
        std::vector<double> xa(a.col(d).data(), a.col(d).data() + a.rows());
        std::vector<double> xb(b.col(d).data(), b.col(d).data() + b.rows());
        if (sample_sd(xa) <= 0 || sample_sd(xb) <= 0) {
            pair.degenerate = true;
            continue;
        }
        // Shared grid across both groups for direct curve comparison.
        KdeCurve ka = kde(xa), kb = kde(xb);
        double lo = std::min(ka.grid.front(), kb.grid.front());
        double hi = std::max(ka.grid.back(), kb.grid.back());
        constexpr int kGridPoints = 512;
        pair.grid.resize(kGridPoints);
        pair.density_a.resize(kGridPoints);
        pair.density_b.resize(kGridPoints);
        auto eval = [](const std::vector<double>& xs, double h, double x) {
            double acc = 0;
            for (double xi : xs) {
                double z = (x - xi) / h;
                acc += std::exp(-0.5 * z * z);
            }
            return acc / (static_cast<double>(xs.size()) * h * std::sqrt(2.0 * M_PI));
        };
        for (int g = 0; g < kGridPoints; ++g) {
            double x = lo + (hi - lo) * g / (kGridPoints - 1);
            pair.grid[static_cast<std::size_t>(g)] = x;
            pair.density_a[static_cast<std::size_t>(g)] = eval(xa, ka.bandwidth, x);
            pair.density_b[static_cast<std::size_t>(g)] = eval(xb, kb.bandwidth, x);
        }
    }
    return out;
}

std::array<PersonalityCurve, 5> build_curves(
    const std::vector<std::pair<int, TraitVector>>& aged_scores,
    const std::vector<double>& bin_edges) {
    if (bin_edges.size() < 2 || !std::is_sorted(bin_edges.begin(), bin_edges.end()))
        throw ValidationError("build_curves: bin edges must be ascending");
    const std::size_t bins = bin_edges.size() - 1;
    std::array<PersonalityCurve, 5> out;
    for (Domain d : kDomains) {
        auto& c = out[static_cast<int>(d)];
        c.trait = d;
        c.bin_edges = bin_edges;
        c.values.assign(bins, 0.0);
        c.counts.assign(bins, 0);
    }
    std::size_t placed = 0;
    for (const auto& [age, traits] : aged_scores) {
        // Left-closed, right-open bins: edge values land in the upper bin.
        auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), static_cast<double>(age));
        if (it == bin_edges.begin()) continue;                 // below the first edge
        std::size_t bin = static_cast<std::size_t>(it - bin_edges.begin()) - 1;
        if (bin >= bins) continue;                             // at/after the last edge
        ++placed;
        for (Domain d : kDomains) {
            auto& c = out[static_cast<int>(d)];
            c.values[bin] += traits[d];
            c.counts[bin] += 1;
        }
    }
    if (placed == 0) throw DataError("build_curves: no record falls in any bin");
    for (Domain d : kDomains) {
        auto& c = out[static_cast<int>(d)];
        for (std::size_t b = 0; b < bins; ++b)
            if (c.counts[b] > 0) c.values[b] /= static_cast<double>(c.counts[b]);
        c.validate();
    }
    return out;
}

double curve_distance(const PersonalityCurve& llm, const PersonalityCurve& human) {
    if (llm.bin_edges != human.bin_edges)
        throw ValidationError("curve_distance: bin edges differ");
    double acc = 0;
    std::size_t common = 0;
    for (std::size_t b = 0; b < llm.bin_count(); ++b) {
        if (!llm.defined(b) || !human.defined(b)) continue;
        double d = llm.values[b] - human.values[b];
        acc += d * d;
        ++common;
    }
    if (common == 0) throw DataError("curve_distance: no common defined bins");
    return std::sqrt(acc);
}

double total_curve_distance(std::span<const double> per_trait) {
    double acc = 0;
    for (double d : per_trait) {
        if (d < 0) throw ValidationError("total_curve_distance: negative distance");
        acc += d * d;
    }
    return std::sqrt(acc);
}

CurveComparison compare_to_baseline(const std::string& strategy,
                                    const std::array<PersonalityCurve, 5>& curves,
                                    const HumanBaseline& baseline) {
    CurveComparison cmp;
    cmp.strategy = strategy;
    std::array<double, 5> ds{};
    for (Domain d : kDomains) {
        double dist = curve_distance(curves[static_cast<int>(d)], baseline.curve(d));
        ds[static_cast<int>(d)] = dist;
        cmp.per_trait[domain_code(d)] = dist;
    }
    cmp.total = total_curve_distance(ds);
    return cmp;
}

Eigen::MatrixXd traits_matrix(const std::vector<TraitVector>& rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), 5);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int d = 0; d < 5; ++d)
            m(static_cast<Eigen::Index>(i), d) = rows[i].values[static_cast<std::size_t>(d)];
    return m;
}

}  // namespace persim
