#include "clustcons/single_link.hpp"
#include "clustcons/synthetic.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace clustcons;

namespace {

Dataset line(std::vector<double> xs) {
    std::vector<Point> rows;
    for (double x : xs) {
        rows.push_back({x});
    }
    return Dataset::from_rows(rows);
}

LinkTree make_tree(const Dataset& d, int cluster, std::vector<std::size_t> members, std::vector<Edge> edges) {
    LinkTree t;
    t.cluster = cluster;
    t.members = std::move(members);
    t.edges = std::move(edges);
    return rebuild_link_tree(d, t);
}

// Two clusters of random points inside disks far apart relative to their size.
Dataset two_disks(std::uint64_t seed, std::size_t per) {
    auto a = uniform_disk({0.0, 0.0}, 1.0, per, seed);
    auto b = uniform_disk({8.0, 0.0}, 1.0, per, seed + 1000);
    a.insert(a.end(), b.begin(), b.end());
    return Dataset::from_rows(a);
}

std::vector<double> mst_weights(const LinkTree& t) {
    std::vector<double> w;
    for (const Edge& e : t.edges) {
        w.push_back(e.weight);
    }
    return w;
}

// Every sampled boundary point of every new ball lies in some original ball.
bool area_contained(const ClusterArea& inner, const ClusterArea& outer, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (const Ball& b : inner.balls) {
        for (int s = 0; s < 64; ++s) {
            Point dir(b.center.size());
            double norm = 0.0;
            for (auto& v : dir) {
                v = g(rng);
                norm += v * v;
            }
            norm = std::sqrt(norm);
            Point x = b.center;
            for (std::size_t c = 0; c < x.size(); ++c) {
                x[c] += b.radius * dir[c] / norm;
            }
            if (distance_to_area(x, outer) > 1e-9) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("single link on a line") {
    const Dataset d = line({0.0, 1.0, 2.0, 10.0, 11.0, 12.0});
    const auto r = single_link_k(d, 2);
    CHECK(r.partition.labels() == std::vector<int>{0, 0, 0, 1, 1, 1});
    REQUIRE(r.trees.size() == 2);
    CHECK(r.trees[0].members == std::vector<std::size_t>{0, 1, 2});
    CHECK(r.trees[0].edges.size() == 2);
    CHECK(r.trees[0].longest_incident == std::vector<double>{1.0, 1.0, 1.0});

    CHECK(single_link_k(d, 1).partition.labels() == std::vector<int>(6, 0));
    CHECK(single_link_k(d, 6).partition.labels() == std::vector<int>{0, 1, 2, 3, 4, 5});
    CHECK(single_link_k(d, 6).trees[3].longest_incident == std::vector<double>{0.0});
    CHECK_THROWS_AS(single_link_k(d, 7), ValidationError);
    CHECK_THROWS_AS(single_link_k(d, 0), ValidationError);
}

TEST_CASE("single link matches agglomerative merging") {
    std::mt19937_64 rng(4);
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 39;
        const int k = 1 + static_cast<int>(rng() % std::min<std::size_t>(n, 6));
        const Dataset d = oracle::random_dataset(n, 1 + trial % 3, 500 + trial);
        const auto r = single_link_k(d, k);
        const auto naive = oracle::naive_single_link(d, k);
        CHECK(r.partition.labels() == naive);
        CHECK(disagreement_count(r.partition.labels(), naive) == 0);
        for (const LinkTree& t : r.trees) {
            CHECK(t.edges.size() + 1 == t.members.size());
        }
    }
}

TEST_CASE("link-ball separation") {
    const Dataset d = line({0.0, 1.0, 2.0, 10.0, 11.0, 12.0});
    const auto r = single_link_k(d, 2);
    const ClusterArea area = cluster_area(d, r.trees[0]);
    const std::vector<double> ten{10.0};
    CHECK(distance_to_area(ten, area) == doctest::Approx(7.0));
    const std::vector<double> inside{2.5};
    CHECK(distance_to_area(inside, area) == 0.0);
    const auto sep = check_link_ball_separation(d, r.partition, r.trees, 0);
    CHECK(sep.separated);
    CHECK(sep.margin == doctest::Approx(6.0));
    CHECK(link_ball_separated(d, r.partition, r.trees, 1));

    // Interleaved clusters at unit spacing: every outside node sits inside the area.
    const Dataset mixed = line({0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
    const Partition mp = Partition::from_labels(mixed, {0, 1, 0, 1, 0, 1});
    const std::vector<LinkTree> mt{make_tree(mixed, 0, {0, 2, 4}, {{0, 2, 0.0}, {2, 4, 0.0}}),
                                   make_tree(mixed, 1, {1, 3, 5}, {{1, 3, 0.0}, {3, 5, 0.0}})};
    const auto bad = check_link_ball_separation(mixed, mp, mt, 0);
    CHECK_FALSE(bad.separated);
    REQUIRE(bad.violating_node.has_value());
    CHECK(mp.label(*bad.violating_node) == 1);

    // A singleton far cluster has a single radius-0 ball.
    const Dataset far = line({0.0, 1.0, 2.0, 10.0});
    const auto fr = single_link_k(far, 2);
    const auto fsep = check_link_ball_separation(far, fr.partition, fr.trees, 1);
    CHECK(fsep.separated);
    CHECK(fsep.margin == doctest::Approx(7.0));

    std::vector<LinkTree> broken = r.trees;
    broken[0].edges.pop_back();
    CHECK_THROWS_AS(link_ball_separated(d, r.partition, broken, 0), ValidationError);
    broken = r.trees;
    broken[0].edges[1] = {2, 3, 8.0};
    CHECK_THROWS_AS(link_ball_separated(d, r.partition, broken, 0), ValidationError);
    CHECK_THROWS_AS(link_ball_separated(d, r.partition, r.trees, 2), ValidationError);
}

TEST_CASE("semi-centric leaf move") {
    const Dataset d = line({0.0, 1.0, 2.0, 10.0, 11.0, 12.0});
    const auto r = single_link_k(d, 2);
    SemiCentricSpec spec;
    spec.cluster_id = 0;
    spec.node = 0;
    spec.lambda = 0.5;
    const auto out = semi_centric_transform(d, r.partition, r.trees, spec);
    CHECK(out.result.dataset.point(0)[0] == doctest::Approx(0.5));
    CHECK(out.moved == std::vector<std::size_t>{0});
    for (std::size_t i = 1; i < 6; ++i) {
        CHECK(out.result.dataset.point(i)[0] == d.point(i)[0]);
    }
    const auto again = single_link_k(out.result.dataset, 2);
    CHECK(disagreement_count(again.partition.labels(), r.partition.labels()) == 0);
    CHECK(link_ball_separated(out.result.dataset, r.partition, out.trees, 0));

    spec.lambda = 1.0;
    CHECK(semi_centric_transform(d, r.partition, r.trees, spec).result.dataset == d);

    spec.lambda = 0.5;
    spec.node = 1;
    CHECK_THROWS_AS(semi_centric_transform(d, r.partition, r.trees, spec), ValidationError);
    spec.node = 4;
    CHECK_THROWS_AS(semi_centric_transform(d, r.partition, r.trees, spec), ValidationError);
    spec.node = 0;
    spec.lambda = 0.0;
    CHECK_THROWS_AS(semi_centric_transform(d, r.partition, r.trees, spec), ValidationError);

    // Both clusters in sequence stay separated.
    SemiCentricSpec first{0, 2, 0.3, std::nullopt};
    const auto a = semi_centric_transform(d, r.partition, r.trees, first);
    SemiCentricSpec second{1, 3, 0.3, std::nullopt};
    const auto b = semi_centric_transform(a.result.dataset, r.partition, a.trees, second);
    CHECK(link_ball_separated(b.result.dataset, r.partition, b.trees, 0));
    CHECK(link_ball_separated(b.result.dataset, r.partition, b.trees, 1));
    CHECK(b.result.dataset.point(3)[0] == doctest::Approx(10.7));
}

TEST_CASE("semi-centric branch move") {
    const Dataset d = Dataset::from_rows({{0.0, 0.0}, {1.0, 0.0}, {1.5, 0.0}, {-10.0, 0.0}, {100.0, 0.0}, {101.0, 0.0}});
    const auto r = single_link_k(d, 2);
    REQUIRE(r.partition.labels() == std::vector<int>{0, 0, 0, 0, 1, 1});
    SemiCentricSpec spec;
    spec.cluster_id = 0;
    spec.node = 0;
    spec.branch_root = 1;
    spec.lambda = 0.5;
    const auto out = semi_centric_transform(d, r.partition, r.trees, spec);
    CHECK(out.moved == std::vector<std::size_t>{1, 2});
    CHECK(out.result.dataset.point(1)[0] == doctest::Approx(0.5));
    CHECK(out.result.dataset.point(2)[0] == doctest::Approx(1.0));
    CHECK(out.result.dataset.point(3)[0] == -10.0);
    CHECK(out.result.provenance["branch_motion"] == "rigid translation along the anchor edge");
    CHECK(disagreement_count(single_link_k(out.result.dataset, 2).partition.labels(), r.partition.labels()) == 0);
    CHECK(area_contained(cluster_area(out.result.dataset, out.trees[0]), cluster_area(d, r.trees[0]), 1));

    spec.branch_root = 4;
    CHECK_THROWS_AS(semi_centric_transform(d, r.partition, r.trees, spec), ValidationError);

    // Anchored at 1, the branch {0, 3} carries a ball of radius 10 off its place.
    spec.node = 1;
    spec.branch_root = 0;
    CHECK_THROWS_AS(semi_centric_transform(d, r.partition, r.trees, spec), RefusalError);
}

TEST_CASE("semi-centric refusals") {
    const Dataset far = line({0.0, 1.0, 2.0, 10.0});
    const auto fr = single_link_k(far, 2);
    SemiCentricSpec single{1, 3, 0.5, std::nullopt};
    CHECK_THROWS_AS(semi_centric_transform(far, fr.partition, fr.trees, single), RefusalError);

    const Dataset mixed = line({0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
    const Partition mp = Partition::from_labels(mixed, {0, 1, 0, 1, 0, 1});
    const std::vector<LinkTree> mt{make_tree(mixed, 0, {0, 2, 4}, {{0, 2, 0.0}, {2, 4, 0.0}}),
                                   make_tree(mixed, 1, {1, 3, 5}, {{1, 3, 0.0}, {3, 5, 0.0}})};
    SemiCentricSpec leaf{0, 0, 0.5, std::nullopt};
    CHECK_THROWS_AS(semi_centric_transform(mixed, mp, mt, leaf), RefusalError);
}

TEST_CASE("semi-centric properties on random separated clusters") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const Dataset d = two_disks(seed, 12);
        const auto r = single_link_k(d, 2);
        REQUIRE(link_ball_separated(d, r.partition, r.trees, 0));
        for (const LinkTree& t : r.trees) {
            for (std::size_t m = 0; m < t.members.size(); ++m) {
                int degree = 0;
                for (const Edge& e : t.edges) {
                    degree += (e.u == t.members[m] || e.v == t.members[m]) ? 1 : 0;
                }
                if (degree != 1) {
                    continue;
                }
                for (double lambda : {0.3, 0.6, 0.9}) {
                    SemiCentricSpec spec{t.cluster, t.members[m], lambda, std::nullopt};
                    const auto out = semi_centric_transform(d, r.partition, r.trees, spec);
                    const Dataset& y = out.result.dataset;
                    CHECK(disagreement_count(single_link_k(y, 2).partition.labels(), r.partition.labels()) == 0);
                    CHECK(link_ball_separated(y, r.partition, out.trees, t.cluster));
                    const auto before = mst_weights(t);
                    const auto after = mst_weights(out.trees[static_cast<std::size_t>(t.cluster)]);
                    for (std::size_t e = 0; e < before.size(); ++e) {
                        CHECK(after[e] <= before[e] + 1e-9);
                    }
                    CHECK(area_contained(cluster_area(y, out.trees[static_cast<std::size_t>(t.cluster)]),
                                         cluster_area(d, t), seed));
                    ++checked;
                }
            }
        }
    }
    CHECK(checked > 100);
}
