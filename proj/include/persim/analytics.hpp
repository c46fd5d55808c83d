#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "persim/baseline.hpp"
#include "persim/types.hpp"

namespace persim {

// chi-square(df=5) 0.995 quantile; squared Mahalanobis distances above this
// are dropped by the outlier filter.
inline constexpr double kChiSq5Q995 = 16.749602343639041;

// Sample covariance (divisor n-1) with ridge lambda*I, lambda = 1e-6 * mean
// diagonal, so downstream factorizations never see an exactly singular matrix.
Eigen::MatrixXd covariance(const Eigen::MatrixXd& samples);

// sqrt((x-mu)^T Sigma^-1 (x-mu)) via Cholesky solve; throws on non-SPD input.
double mahalanobis(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                   const Eigen::MatrixXd& cov);
std::vector<double> mahalanobis_all(const Eigen::MatrixXd& samples, const Eigen::VectorXd& mean,
                                    const Eigen::MatrixXd& cov);

// Indexes of points whose squared distance stays within the chi-square(5)
// 0.995 cutoff; single pass, no re-fitting.
std::vector<std::size_t> filter_outliers(const std::vector<double>& distances);

// Sample SD (n-1) over mean; requires a positive mean.
double coefficient_of_variation(std::span<const double> xs);

// Fisher excess kurtosis m4/m2^2 - 3 with bias-uncorrected moments.
double excess_kurtosis(std::span<const double> xs);

struct KdeCurve {
    std::vector<double> grid;     // 512 points spanning [min-3h, max+3h]
    std::vector<double> density;  // Gaussian kernel, Silverman bandwidth
    double bandwidth = 0;
};
KdeCurve kde(std::span<const double> xs);

struct KMeansResult {
    std::vector<int> assignments;
    Eigen::MatrixXd centroids;      // k x d
    double sse = 0;                 // within-cluster sum of squares
    std::vector<double> sse_trace;  // per-iteration SSE of the winning restart
    int degenerate_clusters = 0;    // clusters left empty at convergence
};
// k-means++ seeding, 50 restarts, best SSE kept; deterministic under seed.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts = 50);

// Chance-corrected partition agreement from the contingency table.
double adjusted_rand_index(std::span<const int> labels_a, std::span<const int> labels_b);

// Euclidean distance between exactly two centroids (rows of a 2 x d matrix).
double centroid_distance(const Eigen::MatrixXd& centroids);

// Per-dimension pooled within-group SD of two samples (the standardization
// used for clustering space and ACD reporting).
Eigen::VectorXd pooled_within_sd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Explained-variance ratios (descending, summing to 1) of the sample
// covariance eigenvalues.
std::vector<double> pca_explained(const Eigen::MatrixXd& points);

struct StabilityReport {
    std::string persona_id;
    std::string label;  // e.g. "poor" / "standard"
    std::size_t n_raw = 0;
    std::size_t n_kept = 0;
    std::vector<double> mahalanobis_distances;  // all n_raw, pre-filter
    double cv = 0;
    double kurtosis = 0;
    KdeCurve kde_curve;
    TraitVector mean_traits;  // rescaled, over kept rows
};

enum class CvMode { distances, scores };

// Full individual-level stability chain: center/covariance from the same
// sample, distances, chi-square filter, CV (distances mode by default,
// scores mode = mean per-domain SD/mean), kurtosis and KDE on kept distances.
StabilityReport stability_report(const std::string& persona_id, const std::string& label,
                                 const Eigen::MatrixXd& traits, CvMode cv_mode = CvMode::distances);

struct IdentifiabilityReport {
    std::vector<std::string> persona_ids;
    double ari = 0;
    double centroid_dist = 0;             // pairwise mode only (k=2)
    std::vector<double> pca_explained;    // of the clustered space
    std::vector<int> cluster_assignments;
    std::vector<int> true_labels;
    std::size_t sample_count = 0;
    std::size_t persona_count = 0;
    bool standardized = true;
};

// Pairwise (k=2) identifiability: optional pooled-SD standardization,
// k-means, ARI against true labels, centroid distance, PCA ratios.
IdentifiabilityReport identify_pair(const std::string& id_a, const Eigen::MatrixXd& a,
                                    const std::string& id_b, const Eigen::MatrixXd& b,
                                    std::uint64_t seed, bool standardized = true);

// Grouped identifiability over m personas with k = m clusters.
IdentifiabilityReport identify_group(const std::vector<std::string>& ids,
                                     const std::vector<Eigen::MatrixXd>& groups,
                                     std::uint64_t seed, bool standardized = true);

struct TraitDensityPair {
    Domain trait = Domain::N;
    std::vector<double> grid;
    std::vector<double> density_a;
    std::vector<double> density_b;
    bool degenerate = false;  // zero variance in either group on this trait
};
// Per-OCEAN-dimension score densities of two assessment groups on a shared
// grid; always emits all five pairs.
std::array<TraitDensityPair, 5> euclidean_density_per_trait(const Eigen::MatrixXd& a,
                                                            const Eigen::MatrixXd& b);

// Per-bin mean of rescaled domain scores over [lo, hi) age bins.
std::array<PersonalityCurve, 5> build_curves(const std::vector<std::pair<int, TraitVector>>& aged_scores,
                                             const std::vector<double>& bin_edges);

// Per-trait Euclidean distance over the common defined bins.
double curve_distance(const PersonalityCurve& llm, const PersonalityCurve& human);

// sqrt(sum of squared per-trait distances) (the table's total column).
double total_curve_distance(std::span<const double> per_trait);

struct CurveComparison {
    std::string strategy;
    std::map<char, double> per_trait;  // domain code -> distance
    double total = 0;
};
CurveComparison compare_to_baseline(const std::string& strategy,
                                    const std::array<PersonalityCurve, 5>& curves,
                                    const HumanBaseline& baseline);

// Matrix helpers between store records and analytics space.
Eigen::MatrixXd traits_matrix(const std::vector<TraitVector>& rows);

}  // namespace persim
