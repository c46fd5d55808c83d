#include <doctest.h>

#include <numeric>
#include <random>

#include "persim/analytics.hpp"
#include "test_helpers.hpp"

using namespace persim;

namespace {

// Gauss-Jordan inverse, used as an oracle route independent of Eigen solves.
std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
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

double mahalanobis_by_inverse(const Eigen::VectorXd& x, const Eigen::VectorXd& mu,
                              const Eigen::MatrixXd& cov) {
    const std::size_t n = static_cast<std::size_t>(cov.rows());
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = cov(static_cast<Eigen::Index>(i),
                                                         static_cast<Eigen::Index>(j));
    auto inv = invert(a);
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            acc += (x[static_cast<Eigen::Index>(i)] - mu[static_cast<Eigen::Index>(i)]) *
                   inv[i][j] *
                   (x[static_cast<Eigen::Index>(j)] - mu[static_cast<Eigen::Index>(j)]);
    return std::sqrt(acc);
}

Eigen::MatrixXd random_spd(std::mt19937_64& rng, int d) {
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = testutil::gauss(rng);
    return a.transpose() * a + 0.5 * Eigen::MatrixXd::Identity(d, d);
}

// Pair-counting ARI: 2(ad-bc) / ((a+b)(b+d) + (a+c)(c+d)); an algebraic route
// independent of the contingency-table implementation.
double ari_pair_counting(const std::vector<int>& la, const std::vector<int>& lb) {
    double a = 0, b = 0, c = 0, d = 0;
    for (std::size_t i = 0; i < la.size(); ++i)
        for (std::size_t j = i + 1; j < la.size(); ++j) {
            bool same_a = la[i] == la[j], same_b = lb[i] == lb[j];
            if (same_a && same_b) a += 1;
            else if (same_a) b += 1;
            else if (same_b) c += 1;
            else d += 1;
        }
    double denom = (a + b) * (b + d) + (a + c) * (c + d);
    if (denom == 0) return 1.0;
    return 2.0 * (a * d - b * c) / denom;
}

std::vector<double> to_vec(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        acc += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return acc;
}

}  // namespace

TEST_CASE("covariance: degenerate, independent-columns and symmetry cases") {
    SUBCASE("identical rows collapse to the ridge") {
        Eigen::MatrixXd m(12, 5);
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 5; ++j) m(i, j) = 3.0 + j;
        auto cov = covariance(m);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) CHECK(std::abs(cov(i, j)) < 1e-9);
    }
    SUBCASE("independent unit-variance columns") {
        std::mt19937_64 rng(7);
        Eigen::MatrixXd m(20000, 2);
        for (int i = 0; i < m.rows(); ++i) {
            m(i, 0) = testutil::gauss(rng);
            m(i, 1) = testutil::gauss(rng);
        }
        auto cov = covariance(m);
        CHECK(cov(0, 0) == doctest::Approx(1.0).epsilon(0.1));
        CHECK(cov(1, 1) == doctest::Approx(1.0).epsilon(0.1));
        CHECK(std::abs(cov(0, 1)) < 0.1);
    }
    SUBCASE("always symmetric and within tolerance") {
        std::mt19937_64 rng(8);
        Eigen::MatrixXd m(50, 5);
        for (int i = 0; i < 50; ++i)
            for (int j = 0; j < 5; ++j) m(i, j) = testutil::gauss(rng) * (j + 1);
        auto cov = covariance(m);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                CHECK(std::abs(cov(i, j) - cov(j, i)) < 1e-12);
    }
    SUBCASE("n below 10 is rejected") {
        CHECK_THROWS_AS(covariance(Eigen::MatrixXd::Zero(9, 5)), ValidationError);
    }
}

TEST_CASE("mahalanobis distance: hand case and explicit-inverse oracle") {
    SUBCASE("x at the mean") {
        Eigen::VectorXd mu(5);
        mu << 1, 2, 3, 4, 5;
        CHECK(mahalanobis(mu, mu, Eigen::MatrixXd::Identity(5, 5)) == doctest::Approx(0.0));
    }
    SUBCASE("2-D diagonal hand computation") {
        Eigen::MatrixXd cov(2, 2);
        cov << 4, 0, 0, 1;
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
        Eigen::VectorXd x(2);
        x << 2, 1;
        CHECK(mahalanobis(x, mu, cov) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    }
    SUBCASE("random SPD matrices match the explicit inverse within 1e-9") {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 100; ++trial) {
            auto cov = random_spd(rng, 5);
            Eigen::VectorXd mu(5), x(5);
            for (int i = 0; i < 5; ++i) {
                mu[i] = testutil::gauss(rng);
                x[i] = testutil::gauss(rng) * 2;
            }
            double got = mahalanobis(x, mu, cov);
            double want = mahalanobis_by_inverse(x, mu, cov);
            CHECK(std::abs(got - want) < 1e-9);
        }
    }
    SUBCASE("invariant under invertible linear reparameterization") {
        std::mt19937_64 rng(22);
        for (int trial = 0; trial < 20; ++trial) {
            auto cov = random_spd(rng, 5);
            Eigen::VectorXd mu(5), x(5);
            for (int i = 0; i < 5; ++i) {
                mu[i] = testutil::gauss(rng);
                x[i] = testutil::gauss(rng);
            }
            Eigen::MatrixXd t = random_spd(rng, 5);  // SPD is invertible
            double base = mahalanobis(x, mu, cov);
            double mapped = mahalanobis(t * x, t * mu, t * cov * t.transpose());
            CHECK(std::abs(base - mapped) < 1e-6);
        }
    }
    SUBCASE("non-SPD covariance is rejected") {
        Eigen::MatrixXd bad = -Eigen::MatrixXd::Identity(3, 3);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
        CHECK_THROWS_AS(mahalanobis(z, z, bad), ValidationError);
    }
}

TEST_CASE("outlier filter uses the chi-square(5) 0.995 cutoff") {
    SUBCASE("all points at the center: nothing dropped") {
        std::vector<double> d(20, 0.0);
        CHECK(filter_outliers(d).size() == 20);
    }
    SUBCASE("300 standard-normal 5-D points lose about 0.5%") {
        std::mt19937_64 rng(31);
        Eigen::MatrixXd m(300, 5);
        for (int i = 0; i < 300; ++i)
            for (int j = 0; j < 5; ++j) m(i, j) = testutil::gauss(rng);
        auto cov = covariance(m);
        Eigen::VectorXd mu = m.colwise().mean();
        auto dists = mahalanobis_all(m, mu, cov);
        auto kept = filter_outliers(dists);
        CHECK(kept.size() >= 292);
        CHECK(kept.size() <= 300);
    }
    SUBCASE("boundary: squared distance just over the cutoff is dropped") {
        std::vector<double> d(10, 1.0);
        d[0] = std::sqrt(kChiSq5Q995) + 1e-6;
        CHECK(filter_outliers(d).size() == 9);
        d[0] = std::sqrt(kChiSq5Q995) - 1e-6;
        CHECK(filter_outliers(d).size() == 10);
    }
    SUBCASE("needs 10 points") {
        std::vector<double> d(9, 1.0);
        CHECK_THROWS_AS(filter_outliers(d), ValidationError);
    }
}

TEST_CASE("coefficient of variation") {
    std::vector<double> flat{2, 2, 2};
    CHECK(coefficient_of_variation(flat) == doctest::Approx(0.0));
    std::vector<double> two{1, 3};
    CHECK(coefficient_of_variation(two) == doctest::Approx(0.70711).epsilon(1e-4));
    std::vector<double> zero_mean{-1, 1};
    CHECK_THROWS_AS(coefficient_of_variation(zero_mean), ValidationError);
}

TEST_CASE("excess kurtosis: normal, uniform and two-point shapes") {
    std::mt19937_64 rng(41);
    SUBCASE("standard normal is near zero") {
        std::vector<double> xs(200000);
        for (auto& x : xs) x = testutil::gauss(rng);
        CHECK(std::abs(excess_kurtosis(xs)) < 0.15);
    }
    SUBCASE("uniform is near -1.2") {
        std::vector<double> xs(200000);
        for (auto& x : xs) x = testutil::unif01(rng);
        CHECK(excess_kurtosis(xs) == doctest::Approx(-1.2).epsilon(0.1));
    }
    SUBCASE("symmetric two-point sample is exactly -2") {
        std::vector<double> xs;
        for (int i = 0; i < 100; ++i) xs.push_back(i % 2 ? 1.0 : -1.0);
        CHECK(excess_kurtosis(xs) == doctest::Approx(-2.0).epsilon(1e-12));
    }
    SUBCASE("zero variance rejected") {
        std::vector<double> xs(10, 3.0);
        CHECK_THROWS_AS(excess_kurtosis(xs), ValidationError);
    }
}

TEST_CASE("kde: nonnegative, normalized, mode near the bulk") {
    std::mt19937_64 rng(51);
    std::vector<double> xs(500);
    for (auto& x : xs) x = 10.0 + 2.0 * testutil::gauss(rng);
    auto curve = kde(xs);
    CHECK(curve.grid.size() == 512);
    for (double d : curve.density) CHECK(d >= 0.0);
    CHECK(trapezoid(curve.grid, curve.density) == doctest::Approx(1.0).epsilon(1e-3));

    auto sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    double median = sorted[sorted.size() / 2];
    auto it = std::max_element(curve.density.begin(), curve.density.end());
    double mode = curve.grid[static_cast<std::size_t>(it - curve.density.begin())];
    CHECK(std::abs(mode - median) < curve.bandwidth + 0.5);

    std::vector<double> constant(10, 1.0);
    CHECK_THROWS_AS(kde(constant), ValidationError);
}

TEST_CASE("kmeans: separation, determinism, k=1, SSE monotone") {
    std::mt19937_64 rng(61);
    Eigen::MatrixXd pts(200, 5);
    std::vector<int> labels(200);
    for (int i = 0; i < 200; ++i) {
        bool second = i >= 100;
        labels[i] = second ? 1 : 0;
        for (int j = 0; j < 5; ++j)
            pts(i, j) = testutil::gauss(rng) + (second && j == 0 ? 20.0 : 0.0);
    }
    auto km = kmeans(pts, 2, 9);
    CHECK(adjusted_rand_index(labels, km.assignments) == doctest::Approx(1.0));

    auto again = kmeans(pts, 2, 9);
    CHECK(km.assignments == again.assignments);

    auto one = kmeans(pts, 1, 9);
    Eigen::RowVectorXd mean = pts.colwise().mean();
    for (int j = 0; j < 5; ++j) CHECK(one.centroids(0, j) == doctest::Approx(mean(j)));

    for (std::size_t i = 1; i < km.sse_trace.size(); ++i)
        CHECK(km.sse_trace[i] <= km.sse_trace[i - 1] + 1e-9);

    CHECK_THROWS_AS(kmeans(pts, 201, 1), ValidationError);

    // Fewer distinct points than clusters: degenerate clusters are reported.
    Eigen::MatrixXd dup = Eigen::MatrixXd::Zero(10, 5);
    auto degen = kmeans(dup, 3, 5);
    CHECK(degen.degenerate_clusters >= 1);
}

TEST_CASE("adjusted Rand index: hand case, bounds and invariances") {
    std::vector<int> a{0, 0, 1, 1}, b{0, 1, 0, 1};
    CHECK(adjusted_rand_index(a, b) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(adjusted_rand_index(a, a) == doctest::Approx(1.0));

    SUBCASE("symmetry and label-permutation invariance") {
        std::mt19937_64 rng(71);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int> x(30), y(30);
            for (int i = 0; i < 30; ++i) {
                x[i] = static_cast<int>(rng() % 3);
                y[i] = static_cast<int>(rng() % 3);
            }
            double xy = adjusted_rand_index(x, y);
            CHECK(adjusted_rand_index(y, x) == doctest::Approx(xy).epsilon(1e-12));
            std::vector<int> y_relabeled(30);
            int map[3] = {2, 0, 1};
            for (int i = 0; i < 30; ++i) y_relabeled[i] = map[y[i]];
            CHECK(adjusted_rand_index(x, y_relabeled) == doctest::Approx(xy).epsilon(1e-12));
        }
    }
    SUBCASE("random balanced labels score near zero") {
        std::mt19937_64 rng(72);
        std::vector<int> x(20000), y(20000);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = static_cast<int>(rng() % 2);
            y[i] = static_cast<int>(rng() % 2);
        }
        CHECK(std::abs(adjusted_rand_index(x, y)) < 0.05);
    }
    SUBCASE("exhaustive small-n agreement with the pair-counting route") {
        for (int n = 2; n <= 6; ++n) {
            int total = 1;
            for (int i = 0; i < n; ++i) total *= 3;
            for (int code_a = 0; code_a < total; ++code_a) {
                std::vector<int> la(static_cast<std::size_t>(n));
                int ca = code_a;
                for (int i = 0; i < n; ++i) {
                    la[static_cast<std::size_t>(i)] = ca % 3;
                    ca /= 3;
                }
                for (int code_b = 0; code_b < total; ++code_b) {
                    std::vector<int> lb(static_cast<std::size_t>(n));
                    int cb = code_b;
                    for (int i = 0; i < n; ++i) {
                        lb[static_cast<std::size_t>(i)] = cb % 3;
                        cb /= 3;
                    }
                    double got = adjusted_rand_index(la, lb);
                    double want = ari_pair_counting(la, lb);
                    REQUIRE(std::abs(got - want) < 1e-9);
                }
            }
        }
    }
    SUBCASE("length mismatch") {
        std::vector<int> x{0, 1}, y{0, 1, 0};
        CHECK_THROWS_AS(adjusted_rand_index(x, y), ValidationError);
    }
}

TEST_CASE("centroid distance") {
    Eigen::MatrixXd same(2, 5);
    same << 1, 2, 3, 4, 5, 1, 2, 3, 4, 5;
    CHECK(centroid_distance(same) == doctest::Approx(0.0));

    Eigen::MatrixXd e1(2, 5);
    e1.setZero();
    e1(0, 0) = 1;
    e1(1, 0) = -1;
    CHECK(centroid_distance(e1) == doctest::Approx(2.0));

    CHECK_THROWS_AS(centroid_distance(Eigen::MatrixXd::Zero(3, 5)), ValidationError);
}

TEST_CASE("pca explained variance") {
    SUBCASE("points on a line put everything on PC1") {
        Eigen::MatrixXd pts(50, 5);
        pts.setZero();
        for (int i = 0; i < 50; ++i) {
            double t = i * 0.1;
            pts(i, 0) = t;
            pts(i, 1) = 2 * t;
        }
        auto ratios = pca_explained(pts);
        CHECK(ratios[0] == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("isotropic 5-D Gaussian splits evenly") {
        std::mt19937_64 rng(81);
        Eigen::MatrixXd pts(50000, 5);
        for (int i = 0; i < pts.rows(); ++i)
            for (int j = 0; j < 5; ++j) pts(i, j) = testutil::gauss(rng);
        for (double r : pca_explained(pts)) CHECK(r == doctest::Approx(0.2).epsilon(0.15));
    }
    SUBCASE("ratios sum to one and never increase") {
        std::mt19937_64 rng(82);
        Eigen::MatrixXd pts(100, 5);
        for (int i = 0; i < 100; ++i)
            for (int j = 0; j < 5; ++j) pts(i, j) = testutil::gauss(rng) * (j + 1);
        auto ratios = pca_explained(pts);
        CHECK(std::accumulate(ratios.begin(), ratios.end(), 0.0) ==
              doctest::Approx(1.0).epsilon(1e-9));
        for (std::size_t i = 1; i < ratios.size(); ++i) CHECK(ratios[i] <= ratios[i - 1] + 1e-12);
    }
    SUBCASE("zero variance rejected") {
        CHECK_THROWS_AS(pca_explained(Eigen::MatrixXd::Zero(10, 5)), ValidationError);
    }
}

TEST_CASE("per-trait density pairs") {
    std::mt19937_64 rng(91);
    Eigen::MatrixXd a(200, 5), b(200, 5);
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 5; ++j) {
            a(i, j) = 50 + 2 * testutil::gauss(rng);
            b(i, j) = 50 + 2 * testutil::gauss(rng) + (j == 4 ? 15.0 : 0.0);  // C shifted
        }
    auto pairs = euclidean_density_per_trait(a, b);
    REQUIRE(pairs.size() == 5);

    auto overlap = [](const TraitDensityPair& p) {
        // L1 distance between the two densities: 0 = identical, 2 = disjoint.
        double acc = 0;
        for (std::size_t i = 1; i < p.grid.size(); ++i) {
            double step = p.grid[i] - p.grid[i - 1];
            acc += 0.5 * (std::abs(p.density_a[i] - p.density_b[i]) +
                          std::abs(p.density_a[i - 1] - p.density_b[i - 1])) * step;
        }
        return acc;
    };
    CHECK(overlap(pairs[static_cast<int>(Domain::C)]) > 1.5);
    for (Domain d : {Domain::N, Domain::E, Domain::O, Domain::A})
        CHECK(overlap(pairs[static_cast<int>(d)]) < 0.8);

    auto self_pairs = euclidean_density_per_trait(a, a);
    for (const auto& p : self_pairs)
        for (std::size_t i = 0; i < p.grid.size(); ++i)
            CHECK(p.density_a[i] == doctest::Approx(p.density_b[i]));
}

TEST_CASE("curve building conventions") {
    std::vector<double> edges{15, 25, 35};
    TraitVector v;
    for (Domain d : kDomains) v[d] = 50;

    SUBCASE("all ages in one bin give the global mean") {
        TraitVector w = v;
        w[Domain::O] = 60;
        auto curves = build_curves({{20, v}, {21, w}}, edges);
        const auto& o = curves[static_cast<int>(Domain::O)];
        CHECK(o.defined(0));
        CHECK(!o.defined(1));
        CHECK(o.values[0] == doctest::Approx(55.0));
    }
    SUBCASE("bin boundary goes to the upper (left-closed) bin") {
        auto curves = build_curves({{25, v}}, edges);
        CHECK(!curves[0].defined(0));
        CHECK(curves[0].defined(1));
    }
    SUBCASE("ages outside all bins are excluded; none at all errors") {
        auto curves = build_curves({{20, v}, {99, v}}, edges);
        CHECK(curves[0].counts[0] == 1);
        CHECK_THROWS_AS(build_curves({{99, v}}, edges), DataError);
    }
}

TEST_CASE("curve distance: identity, offset, metric properties") {
    PersonalityCurve a;
    a.trait = Domain::N;
    for (int b = 0; b <= 10; ++b) a.bin_edges.push_back(15 + b * 5);
    a.values.assign(10, 50.0);
    a.counts.assign(10, 5);

    CHECK(curve_distance(a, a) == doctest::Approx(0.0));

    PersonalityCurve b = a;
    for (auto& value : b.values) value += 2.0;
    CHECK(curve_distance(a, b) == doctest::Approx(2.0 * std::sqrt(10.0)).epsilon(1e-9));

    SUBCASE("triangle inequality on random curves") {
        std::mt19937_64 rng(101);
        for (int trial = 0; trial < 100; ++trial) {
            PersonalityCurve x = a, y = a, z = a;
            for (std::size_t i = 0; i < 10; ++i) {
                x.values[i] = testutil::unif01(rng) * 100;
                y.values[i] = testutil::unif01(rng) * 100;
                z.values[i] = testutil::unif01(rng) * 100;
            }
            CHECK(curve_distance(x, z) <=
                  curve_distance(x, y) + curve_distance(y, z) + 1e-9);
        }
    }
    SUBCASE("mismatched bins are rejected") {
        PersonalityCurve c = a;
        c.bin_edges[0] = 14;
        CHECK_THROWS_AS(curve_distance(a, c), ValidationError);
    }
    SUBCASE("no common defined bins") {
        PersonalityCurve c = a, d = a;
        for (std::size_t i = 0; i < 10; ++i) {
            c.counts[i] = i < 5 ? 1 : 0;
            d.counts[i] = i < 5 ? 0 : 1;
        }
        CHECK_THROWS_AS(curve_distance(c, d), DataError);
    }
}

TEST_CASE("total distance reproduces the published per-trait rows") {
    auto total = [](std::array<double, 5> d) { return total_curve_distance(d); };
    CHECK(total({32.23, 21.05, 28.74, 34.48, 37.92}) == doctest::Approx(70.25).epsilon(0.0008));
    CHECK(total({26.50, 24.39, 30.80, 29.16, 30.50}) == doctest::Approx(63.45).epsilon(0.0008));
    CHECK(total({9.98, 30.80, 11.92, 27.55, 25.95}) == doctest::Approx(51.21).epsilon(0.0008));
    CHECK(total({4.85, 13.77, 11.07, 13.23, 7.28}) == doctest::Approx(23.75).epsilon(0.0008));
    CHECK(total({0, 0, 0, 0, 0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(total({1, 2, 3, 4, -1}), ValidationError);
}

TEST_CASE("stability report wiring") {
    std::mt19937_64 rng(111);
    Eigen::MatrixXd traits(300, 5);
    for (int i = 0; i < 300; ++i)
        for (int j = 0; j < 5; ++j) traits(i, j) = 55 + 3 * testutil::gauss(rng);
    auto rep = stability_report("p1", "standard", traits, CvMode::distances);
    CHECK(rep.n_raw == 300);
    CHECK(rep.n_kept <= rep.n_raw);
    CHECK(rep.n_kept >= 290);
    CHECK(rep.mahalanobis_distances.size() == 300);
    CHECK(trapezoid(rep.kde_curve.grid, rep.kde_curve.density) ==
          doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rep.cv > 0);
    auto scores_mode = stability_report("p1", "standard", traits, CvMode::scores);
    CHECK(scores_mode.cv > 0);
    CHECK(scores_mode.cv < rep.cv);  // per-domain CV of tight scores is small
}

TEST_CASE("identifiability reports") {
    std::mt19937_64 rng(121);
    auto blob = [&](double shift) {
        Eigen::MatrixXd m(300, 5);
        for (int i = 0; i < 300; ++i)
            for (int j = 0; j < 5; ++j)
                m(i, j) = 50 + 2 * testutil::gauss(rng) + (j == 0 ? shift : 0.0);
        return m;
    };
    auto a = blob(0), b = blob(30);
    auto rep = identify_pair("pa", a, "pb", b, 5, true);
    CHECK(rep.ari == doctest::Approx(1.0));
    CHECK(rep.centroid_dist > 5);
    CHECK(rep.sample_count == 600);
    CHECK(rep.pca_explained.size() == 5);

    auto c = blob(60);
    auto grouped = identify_group({"pa", "pb", "pc"}, {a, b, c}, 5, true);
    CHECK(grouped.ari == doctest::Approx(1.0));
    CHECK(grouped.persona_count == 3);
}
