#include "clustcons/kmeans.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <thread>

namespace clustcons {

double kmeans_cost(const Dataset& data, const Partition& partition) {
    if (partition.size() != data.size()) {
        throw ValidationError("partition does not match dataset");
    }
    double q = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        q += squared_distance(data.point(i), partition.centroid(partition.label(i)));
    }
    return q;
}

double kmeans_cost_pairwise(const Dataset& data, const Partition& partition) {
    if (partition.size() != data.size()) {
        throw ValidationError("partition does not match dataset");
    }
    double q = 0.0;
    for (int j = 0; j < partition.k(); ++j) {
        const auto& members = partition.members(j);
        double s = 0.0;
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                s += squared_distance(data.point(members[a]), data.point(members[b]));
            }
        }
        // Each unordered pair appears twice in the full double sum.
        q += s / static_cast<double>(members.size());
    }
    return q;
}

namespace {

void compute_centroids(const Dataset& data, const std::vector<int>& labels, int k, std::vector<double>& centroids,
                       std::vector<std::size_t>& counts) {
    const std::size_t dim = data.dim();
    centroids.assign(static_cast<std::size_t>(k) * dim, 0.0);
    counts.assign(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto l = static_cast<std::size_t>(labels[i]);
        ++counts[l];
        auto p = data.point(i);
        for (std::size_t d = 0; d < dim; ++d) {
            centroids[l * dim + d] += p[d];
        }
    }
    for (std::size_t j = 0; j < counts.size(); ++j) {
        for (std::size_t d = 0; d < dim; ++d) {
            centroids[j * dim + d] /= static_cast<double>(counts[j]);
        }
    }
}

double labeled_cost(const Dataset& data, const std::vector<int>& labels, const std::vector<double>& centroids) {
    const std::size_t dim = data.dim();
    double q = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto l = static_cast<std::size_t>(labels[i]);
        q += squared_distance(data.point(i), std::span<const double>(centroids.data() + l * dim, dim));
    }
    return q;
}

std::vector<int> random_set_labels(std::size_t n, int k, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<int> labels(n);
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (auto& l : labels) {
        l = pick(rng);
        ++counts[static_cast<std::size_t>(l)];
    }
    for (int j = 0; j < k; ++j) {
        if (counts[static_cast<std::size_t>(j)] != 0) {
            continue;
        }
        std::vector<std::size_t> movable;
        for (std::size_t i = 0; i < n; ++i) {
            if (counts[static_cast<std::size_t>(labels[i])] > 1) {
                movable.push_back(i);
            }
        }
        std::uniform_int_distribution<std::size_t> which(0, movable.size() - 1);
        const std::size_t i = movable[which(rng)];
        --counts[static_cast<std::size_t>(labels[i])];
        labels[i] = j;
        ++counts[static_cast<std::size_t>(j)];
    }
    return labels;
}

void validate_kmeans_config(const Dataset& data, const KmeansConfig& config) {
    if (config.k < 1) {
        throw ValidationError("k must be positive");
    }
    if (static_cast<std::size_t>(config.k) > data.size()) {
        throw ValidationError("k = " + std::to_string(config.k) + " exceeds the point count " +
                              std::to_string(data.size()));
    }
    if (config.nstart < 1) {
        throw ValidationError("nstart must be at least 1");
    }
    if (config.max_iters < 1) {
        throw ValidationError("max_iters must be at least 1");
    }
    if (!(config.tolerance >= 0.0)) {
        throw ValidationError("tolerance must be non-negative");
    }
}

}  // namespace

LloydTrace lloyd_descent(const Dataset& data, std::vector<int> labels, int k, int max_iters, double tolerance) {
    const std::size_t n = data.size();
    const std::size_t dim = data.dim();
    std::vector<double> centroids;
    std::vector<std::size_t> counts;
    compute_centroids(data, labels, k, centroids, counts);

    LloydTrace trace;
    trace.costs.push_back(labeled_cost(data, labels, centroids));

    std::vector<int> next(n);
    std::vector<double> dist2(n);
    for (int it = 0; it < max_iters; ++it) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* p = data.coords().data() + i * dim;
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int j = 0; j < k; ++j) {
                const double* c = centroids.data() + static_cast<std::size_t>(j) * dim;
                // Independent partial sums break the add dependency chain.
                double acc[8] = {};
                std::size_t t = 0;
                for (; t + 8 <= dim; t += 8) {
                    for (std::size_t u = 0; u < 8; ++u) {
                        const double diff = p[t + u] - c[t + u];
                        acc[u] += diff * diff;
                    }
                }
                for (; t < dim; ++t) {
                    const double diff = p[t] - c[t];
                    acc[0] += diff * diff;
                }
                const double d = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
                if (d < best_d) {
                    best_d = d;
                    best = j;
                }
            }
            next[i] = best;
            dist2[i] = best_d;
            ++counts[static_cast<std::size_t>(best)];
        }

        for (int j = 0; j < k; ++j) {
            if (counts[static_cast<std::size_t>(j)] != 0) {
                continue;
            }
            std::size_t far = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[static_cast<std::size_t>(next[i])] > 1 && dist2[i] > far_d) {
                    far_d = dist2[i];
                    far = i;
                }
            }
            --counts[static_cast<std::size_t>(next[far])];
            next[far] = j;
            dist2[far] = 0.0;
            ++counts[static_cast<std::size_t>(j)];
        }

        const bool changed = next != labels;
        labels = next;
        compute_centroids(data, labels, k, centroids, counts);
        const double previous = trace.costs.back();
        const double cost = labeled_cost(data, labels, centroids);
        trace.costs.push_back(cost);
        if (!changed || previous - cost < tolerance * previous) {
            break;
        }
    }
    trace.labels = std::move(labels);
    return trace;
}

ClusteringResult lloyd_kmeans(const Dataset& data, const KmeansConfig& config) {
    validate_kmeans_config(data, config);
    const auto nstart = static_cast<std::size_t>(config.nstart);

    struct RestartOutcome {
        std::vector<int> labels;
        double cost = 0.0;
    };
    std::vector<RestartOutcome> outcomes(nstart);

    auto run = [&](std::size_t r) {
        std::mt19937_64 rng(mix_seed(config.seed, r));
        auto init = random_set_labels(data.size(), config.k, rng);
        auto trace = lloyd_descent(data, std::move(init), config.k, config.max_iters, config.tolerance);
        outcomes[r].cost = trace.costs.back();
        outcomes[r].labels = std::move(trace.labels);
    };

    unsigned threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, nstart));
    // Small problems are not worth the thread start-up.
    if (data.size() * data.dim() * nstart < 20000) {
        threads = 1;
    }
    if (threads <= 1) {
        for (std::size_t r = 0; r < nstart; ++r) {
            run(r);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < nstart; r = next++) {
                    run(r);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    std::size_t best = 0;
    for (std::size_t r = 1; r < nstart; ++r) {
        if (outcomes[r].cost < outcomes[best].cost) {
            best = r;
        }
    }
    Partition partition(data, std::move(outcomes[best].labels), config.k);
    const double cost = kmeans_cost(data, partition);
    return ClusteringResult{std::move(partition), cost, config.nstart, static_cast<int>(best)};
}

IdealResult kmeans_ideal(const Dataset& data, int k, std::size_t cap) {
    const std::size_t n = data.size();
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw ValidationError("k = " + std::to_string(k) + " must lie in 1.." + std::to_string(n));
    }
    if (n > cap) {
        throw RefusalError("exhaustive k-means refuses n = " + std::to_string(n) + " (cap " + std::to_string(cap) +
                           ")");
    }
    const std::size_t dim = data.dim();
    const auto uk = static_cast<std::size_t>(k);

    // Centering first keeps the sum-of-squares identity well conditioned.
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const Point mean = centroid(data, all);
    std::vector<double> x(n * dim);
    std::vector<double> norm2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            x[i * dim + d] = data.point(i)[d] - mean[d];
            norm2[i] += x[i * dim + d] * x[i * dim + d];
        }
    }

    std::vector<double> sums(uk * dim, 0.0);
    std::vector<double> sumsq(uk, 0.0);
    std::vector<std::size_t> counts(uk, 0);
    std::vector<int> labels(n, 0);
    std::vector<int> best_labels;
    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();

    auto place = [&](std::size_t i, std::size_t j, double sign) {
        for (std::size_t d = 0; d < dim; ++d) {
            sums[j * dim + d] += sign * x[i * dim + d];
        }
        sumsq[j] += sign * norm2[i];
        if (sign > 0) {
            ++counts[j];
        } else {
            --counts[j];
        }
    };

    auto evaluate = [&] {
        double q = 0.0;
        for (std::size_t j = 0; j < uk; ++j) {
            double s2 = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                s2 += sums[j * dim + d] * sums[j * dim + d];
            }
            q += sumsq[j] - s2 / static_cast<double>(counts[j]);
        }
        q = std::max(q, 0.0);
        if (q < best) {
            second = best;
            best = q;
            best_labels = labels;
        } else if (q < second) {
            second = q;
        }
    };

    // Restricted growth strings: point i joins an existing block or opens the next one.
    auto recurse = [&](auto&& self, std::size_t i, std::size_t used) -> void {
        if (i == n) {
            if (used == uk) {
                evaluate();
            }
            return;
        }
        if (uk - used > n - i) {
            return;
        }
        for (std::size_t j = 0; j < used; ++j) {
            labels[i] = static_cast<int>(j);
            place(i, j, 1.0);
            self(self, i + 1, used);
            place(i, j, -1.0);
        }
        if (used < uk) {
            labels[i] = static_cast<int>(used);
            place(i, used, 1.0);
            self(self, i + 1, used + 1);
            place(i, used, -1.0);
        }
    };
    recurse(recurse, 0, 0);

    Partition partition(data, best_labels, k);
    IdealResult result{std::move(partition), 0.0, second, true, 0.0};
    result.cost = kmeans_cost(data, result.partition);
    const double gap = second - best;
    const double scale = std::max({best, 1e-300});
    if (std::isinf(second)) {
        result.relative_margin = std::numeric_limits<double>::infinity();
    } else if (best <= 0.0) {
        result.relative_margin = gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    } else {
        result.relative_margin = gap / scale;
    }
    // Below this the two costs are indistinguishable from rounding noise.
    result.unique = result.relative_margin > 1e-12;
    return result;
}

LocalOptimumCheck is_local_optimum(const Dataset& data, const Partition& partition) {
    if (partition.size() != data.size()) {
        throw ValidationError("partition does not match dataset");
    }
    const auto& sizes = partition.sizes();
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int from = partition.label(i);
        const double n_from = static_cast<double>(sizes[static_cast<std::size_t>(from)]);
        if (n_from < 2.0) {
            continue;
        }
        const double leave = n_from / (n_from - 1.0) * squared_distance(data.point(i), partition.centroid(from));
        for (int to = 0; to < partition.k(); ++to) {
            if (to == from) {
                continue;
            }
            const double n_to = static_cast<double>(sizes[static_cast<std::size_t>(to)]);
            const double join = n_to / (n_to + 1.0) * squared_distance(data.point(i), partition.centroid(to));
            if (leave > join * (1.0 + kDistanceTolerance)) {
                return {false, i, to};
            }
        }
    }
    return {};
}

namespace {

Dataset subset(const Dataset& data, const std::vector<std::size_t>& members) {
    std::vector<double> coords;
    coords.reserve(members.size() * data.dim());
    for (std::size_t i : members) {
        auto p = data.point(i);
        coords.insert(coords.end(), p.begin(), p.end());
    }
    return Dataset(data.dim(), std::move(coords));
}

double subset_cost(const Dataset& data, const std::vector<std::size_t>& members) {
    const Point mu = centroid(data, members);
    double q = 0.0;
    for (std::size_t i : members) {
        q += squared_distance(data.point(i), mu);
    }
    return q;
}

}  // namespace

BisectResult bisectional_auto_kmeans(const Dataset& data, const BisectConfig& bcfg, const KmeansConfig& kcfg) {
    if (bcfg.kmax < 1) {
        throw ValidationError("kmax must be at least 1");
    }
    if (!(bcfg.rel_decrease_threshold > 0.0 && bcfg.rel_decrease_threshold < 1.0)) {
        throw ValidationError("relative decrease threshold must lie in (0, 1)");
    }
    KmeansConfig split_cfg = kcfg;
    split_cfg.k = 2;

    std::vector<SplitNode> tree;
    SplitNode root;
    root.members.resize(data.size());
    std::iota(root.members.begin(), root.members.end(), std::size_t{0});
    root.cost = subset_cost(data, root.members);
    tree.push_back(std::move(root));

    std::vector<bool> settled{false};
    int leaves = 1;
    std::uint64_t attempt = 0;
    while (leaves < bcfg.kmax) {
        int pick = -1;
        for (std::size_t i = 0; i < tree.size(); ++i) {
            if (tree[i].left < 0 && !settled[i] && (pick < 0 || tree[i].cost > tree[static_cast<std::size_t>(pick)].cost)) {
                pick = static_cast<int>(i);
            }
        }
        if (pick < 0) {
            break;
        }
        const auto p = static_cast<std::size_t>(pick);
        if (tree[p].members.size() < 2 || tree[p].cost <= 0.0) {
            settled[p] = true;
            continue;
        }
        split_cfg.seed = mix_seed(kcfg.seed, attempt++);
        const Dataset sub = subset(data, tree[p].members);
        const ClusteringResult split = lloyd_kmeans(sub, split_cfg);
        const double ratio = split.cost / tree[p].cost;
        tree[p].split_ratio = ratio;
        if (!(ratio < bcfg.rel_decrease_threshold)) {
            settled[p] = true;
            continue;
        }
        for (int side = 0; side < 2; ++side) {
            SplitNode child;
            for (std::size_t local : split.partition.members(side)) {
                child.members.push_back(tree[p].members[local]);
            }
            child.cost = subset_cost(data, child.members);
            child.parent = pick;
            const int id = static_cast<int>(tree.size());
            if (side == 0) {
                tree[p].left = id;
            } else {
                tree[p].right = id;
            }
            tree.push_back(std::move(child));
            settled.push_back(false);
        }
        ++leaves;
    }

    std::vector<std::size_t> leaf_ids;
    for (std::size_t i = 0; i < tree.size(); ++i) {
        if (tree[i].left < 0) {
            leaf_ids.push_back(i);
        }
    }
    std::sort(leaf_ids.begin(), leaf_ids.end(), [&](std::size_t a, std::size_t b) {
        return *std::min_element(tree[a].members.begin(), tree[a].members.end()) <
               *std::min_element(tree[b].members.begin(), tree[b].members.end());
    });
    std::vector<int> labels(data.size(), 0);
    for (std::size_t l = 0; l < leaf_ids.size(); ++l) {
        tree[leaf_ids[l]].label = static_cast<int>(l);
        for (std::size_t i : tree[leaf_ids[l]].members) {
            labels[i] = static_cast<int>(l);
        }
    }
    Partition partition(data, std::move(labels), static_cast<int>(leaf_ids.size()));
    return BisectResult{std::move(partition), std::move(tree)};
}

KmeansLMstResult group_by_center_tree(const Dataset& data, ClusteringResult kmeans, int l) {
    const int k = kmeans.partition.k();
    if (l < 1 || l > k) {
        throw ValidationError("l = " + std::to_string(l) + " must lie in 1..k (k = " + std::to_string(k) + ")");
    }
    std::vector<double> centers;
    for (int j = 0; j < k; ++j) {
        auto c = kmeans.partition.centroid(j);
        centers.insert(centers.end(), c.begin(), c.end());
    }
    std::vector<Edge> tree;
    if (k > 1) {
        tree = minimum_spanning_tree(std::span<const double>(centers), data.dim());
    }

    std::vector<Edge> by_weight = tree;
    std::sort(by_weight.begin(), by_weight.end(), [](const Edge& a, const Edge& b) {
        if (a.weight != b.weight) {
            return a.weight > b.weight;
        }
        if (a.u != b.u) {
            return a.u < b.u;
        }
        return a.v < b.v;
    });
    std::vector<Edge> removed(by_weight.begin(), by_weight.begin() + (l - 1));

    const auto uk = static_cast<std::size_t>(k);
    DisjointSets sets(uk);
    for (const Edge& e : tree) {
        if (std::find(removed.begin(), removed.end(), e) == removed.end()) {
            sets.unite(e.u, e.v);
        }
    }
    std::vector<int> component_of(uk, -1);
    std::vector<int> root_label(uk, -1);
    int next = 0;
    for (std::size_t j = 0; j < uk; ++j) {
        const std::size_t r = sets.find(j);
        if (root_label[r] < 0) {
            root_label[r] = next++;
        }
        component_of[j] = root_label[r];
    }
    std::vector<int> labels(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        labels[i] = component_of[static_cast<std::size_t>(kmeans.partition.label(i))];
    }
    Partition partition(data, std::move(labels), next);
    return KmeansLMstResult{std::move(partition), std::move(kmeans), std::move(tree), std::move(removed),
                            std::move(component_of)};
}

KmeansLMstResult kmeans_l_mst(const Dataset& data, int k, int l, const KmeansConfig& kcfg) {
    if (l < 1 || l > k) {
        throw ValidationError("l = " + std::to_string(l) + " must lie in 1..k (k = " + std::to_string(k) + ")");
    }
    KmeansConfig cfg = kcfg;
    cfg.k = k;
    return group_by_center_tree(data, lloyd_kmeans(data, cfg), l);
}

double concave_lambda_bound(double max_radius, double max_center_distance, double min_gap) {
    if (!(min_gap >= 0.0) || !(max_radius >= 0.0) || !(max_center_distance >= 0.0)) {
        throw ValidationError("concave lambda bound needs non-negative inputs");
    }
    const double denom = 4.0 * max_radius + max_center_distance;
    if (denom <= 0.0) {
        throw RefusalError("concave lambda bound undefined: all centers coincide and all radii are zero");
    }
    return min_gap / denom;
}

double concave_lambda_bound(const Dataset& data, const KmeansLMstResult& result, double min_gap) {
    if (result.partition.k() < 2) {
        throw ValidationError("concave lambda bound needs at least two final clusters");
    }
    const Partition& km = result.kmeans.partition;
    double r_max = 0.0;
    for (int j = 0; j < km.k(); ++j) {
        r_max = std::max(r_max, enclosing_radius(data, km, j));
    }
    double d_max = 0.0;
    for (int a = 0; a < km.k(); ++a) {
        for (int b = a + 1; b < km.k(); ++b) {
            if (result.component_of[static_cast<std::size_t>(a)] != result.component_of[static_cast<std::size_t>(b)]) {
                d_max = std::max(d_max, euclidean_distance(km.centroid(a), km.centroid(b)));
            }
        }
    }
    return concave_lambda_bound(r_max, d_max, min_gap);
}

}  // namespace clustcons
