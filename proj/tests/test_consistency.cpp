#include "clustcons/consistency.hpp"
#include "clustcons/transforms.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace clustcons;

namespace {

Dataset scaled(const Dataset& d, double a) {
    std::vector<double> c = d.coords();
    for (auto& v : c) {
        v *= a;
    }
    return d.with_coords(c);
}

}  // namespace

TEST_CASE("gamma classification") {
    const Dataset d = oracle::random_dataset(10, 2, 1);
    const Partition p = Partition::from_labels(d, {0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
    const auto same = classify_gamma(d, d, p);
    CHECK(same.classification == GammaClass::FullGamma);
    CHECK(same.intra_pairs == 20);
    CHECK(same.inter_pairs == 25);
    CHECK(same.violation_percentage == 0.0);
    CHECK(to_string(GammaClass::FullGamma) == "FullGamma");

    // Uniform contraction shrinks cross distances too.
    const auto shrunk = classify_gamma(d, scaled(d, 0.5), p);
    CHECK(shrunk.classification == GammaClass::NotGamma);
    CHECK(shrunk.inter_decreased == 25);
    CHECK(shrunk.violation_percentage == 100.0);

    // Expansion grows intra distances.
    CHECK(classify_gamma(d, scaled(d, 2.0), p).classification == GammaClass::NotGamma);

    // Pulling one cluster straight away from the other.
    const Dataset far = Dataset::from_rows({{0.0, 0.0}, {0.0, 1.0}, {100.0, 0.0}, {100.0, 1.0}});
    const Partition fp = Partition::from_labels(far, {0, 0, 1, 1});
    const Dataset pulled = Dataset::from_rows({{0.0, 0.0}, {0.0, 1.0}, {110.0, 0.0}, {110.0, 1.0}});
    const auto outer = classify_gamma(far, pulled, fp);
    CHECK(outer.classification == GammaClass::OuterOnly);
    CHECK(outer.inter_changed == 4);
    CHECK(outer.intra_changed == 0);

    const Dataset squeezed = Dataset::from_rows({{0.0, 0.25}, {0.0, 0.75}, {100.0, 0.0}, {100.0, 1.0}});
    const auto inner = classify_gamma(far, squeezed, fp);
    CHECK(inner.intra_changed == 1);
    // Cross distances from the squeezed pair to the far pair change slightly.
    CHECK(inner.classification == GammaClass::NotGamma);

    const Partition single = Partition::from_labels(far, {0, 0, 0, 0});
    CHECK(classify_gamma(far, scaled(far, 0.5), single).classification == GammaClass::InnerOnly);

    const Dataset wrong = oracle::random_dataset(9, 2, 1);
    CHECK_THROWS_AS(classify_gamma(d, wrong, p), ValidationError);
}

TEST_CASE("sampled violation percentage") {
    // Points A..F: A, B in the target cluster; C..F outside. Moving B
    // toward the others shortens B's four cross distances only.
    const Dataset before = Dataset::from_rows({{0.0, 0.0}, {0.0, 1.0}, {10.0, 0.0}, {10.0, 1.0}, {12.0, 0.0}, {12.0, 1.0}});
    const Dataset after = Dataset::from_rows({{0.0, 0.0}, {5.0, 1.0}, {10.0, 0.0}, {10.0, 1.0}, {12.0, 0.0}, {12.0, 1.0}});
    const Partition p = Partition::from_labels(before, {0, 0, 1, 1, 1, 1});
    SamplePlan plan;
    plan.target_cluster = 0;
    CHECK(sampled_violation_percentage(before, after, p, plan) == doctest::Approx(50.0));
    CHECK(sampled_violation_percentage(before, before, p, plan) == 0.0);

    plan.sample_in = 0;
    CHECK_THROWS_AS(sampled_violation_percentage(before, after, p, plan), ValidationError);
    plan.sample_in = 1;
    plan.target_cluster = 2;
    CHECK_THROWS_AS(sampled_violation_percentage(before, after, p, plan), ValidationError);

    // Full samples reproduce the exhaustive cross-pair count.
    const Dataset x = oracle::random_dataset(40, 3, 6);
    std::vector<int> labels(40);
    for (std::size_t i = 0; i < 40; ++i) {
        labels[i] = static_cast<int>(i % 3);
    }
    const Partition q = Partition::from_labels(x, labels);
    CentricSpec spec;
    spec.cluster_id = 1;
    spec.lambda = 0.4;
    const Dataset y = centric_transform(x, q, spec).dataset;
    std::size_t bad = 0;
    std::size_t total = 0;
    for (std::size_t a : q.members(1)) {
        for (std::size_t b = 0; b < 40; ++b) {
            if (labels[b] != 1) {
                ++total;
                bad += oracle::dist(y, a, b) < oracle::dist(x, a, b) * (1.0 - kDistanceTolerance) ? 1 : 0;
            }
        }
    }
    SamplePlan all{1, 1000, 1000, 3};
    CHECK(sampled_violation_percentage(x, y, q, all) ==
          doctest::Approx(100.0 * static_cast<double>(bad) / static_cast<double>(total)));

    // Same seed, same answer; sample sizes below the cluster sizes.
    SamplePlan some{1, 5, 7, 11};
    CHECK(sampled_violation_percentage(x, y, q, some) == sampled_violation_percentage(x, y, q, some));
}

TEST_CASE("gravitational check") {
    const Dataset d = oracle::random_dataset(12, 2, 2);
    std::vector<int> labels{0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1};
    const Partition p = Partition::from_labels(d, labels);

    CentricSpec spec;
    spec.cluster_id = 0;
    spec.lambda = 0.3;
    const Dataset shrunk = centric_transform(d, p, spec).dataset;
    const auto ok = gravitational_check(d, shrunk, p, 0, 100, 1);
    CHECK(ok.consistent);
    CHECK(ok.exhaustive);
    // Unordered pairs of disjoint non-empty subsets of 8 points: (3^8 - 2^9 + 1) / 2.
    CHECK(ok.pairs_checked == (6561 - 512 + 1) / 2);

    // Stretching the cluster pushes subset centroids apart.
    std::vector<double> c = d.coords();
    for (std::size_t i = 0; i < 8; ++i) {
        c[2 * i] *= 1.5;
    }
    const auto broken = gravitational_check(d, d.with_coords(c), p, 0, 100, 1);
    CHECK_FALSE(broken.consistent);
    CHECK(broken.worst_violation > 0.0);

    const Dataset big = oracle::random_dataset(30, 2, 3);
    const Partition bp = Partition::from_labels(big, std::vector<int>(30, 0));
    CentricSpec bs;
    bs.lambda = 0.5;
    const auto sampled = gravitational_check(big, centric_transform(big, bp, bs).dataset, bp, 0, 500, 4);
    CHECK(sampled.consistent);
    CHECK_FALSE(sampled.exhaustive);
    CHECK(sampled.pairs_checked == 500);

    const Dataset two = Dataset::from_rows({{0.0}, {1.0}});
    CHECK_THROWS_AS(gravitational_check(two, two, Partition::from_labels(two, {0, 1}), 0, 10, 0), ValidationError);
}

TEST_CASE("convergent check against the quadratic oracle") {
    const Dataset d = oracle::random_dataset(15, 2, 7);
    CHECK(convergent_check(d, d));
    CHECK(convergent_check(d, scaled(d, 0.3)));
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const Dataset x = oracle::random_dataset(10, 2, 100 + static_cast<std::uint64_t>(trial));
        std::vector<double> c = x.coords();
        const double noise = trial % 2 == 0 ? 1e-3 : 1.0;
        for (auto& v : c) {
            v = 0.5 * v + noise * g(rng);
        }
        const Dataset y = x.with_coords(c);
        CHECK(convergent_check(x, y) == oracle::brute_convergent(x, y));
    }
    CHECK_THROWS_AS(convergent_check(oracle::random_dataset(201, 1, 0), oracle::random_dataset(201, 1, 1)),
                    RefusalError);
}
