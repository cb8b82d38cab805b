#ifndef CLUSTCONS_KMEANS_HPP
#define CLUSTCONS_KMEANS_HPP

#include "clustcons/core.hpp"

#include <cstdint>
#include <optional>
#include <vector>

/**
 * @file kmeans.hpp
 *
 * @brief k-means cost, random-set Lloyd iterations with restarts, an exhaustive
 * oracle for tiny instances, and the k-means derived algorithms
 * (bisecting auto-k-means, k-means-l-MST).
 */

namespace clustcons {

struct KmeansConfig {
    int k = 2;
    /// Number of independent restarts.
    int nstart = 10;
    int max_iters = 100;
    std::uint64_t seed = 0;
    /// A restart stops once the cost improves by less than `tolerance * cost`.
    double tolerance = 1e-10;
    /// Worker threads for restarts; 0 picks the hardware concurrency. Results do not depend on it.
    unsigned threads = 0;
};

struct ClusteringResult {
    Partition partition;
    double cost = 0.0;
    int restarts_run = 0;
    int best_restart_index = 0;
};

/// Sum over clusters of squared distances to the cluster centroid.
double kmeans_cost(const Dataset& data, const Partition& partition);

/// The same quantity via `sum_j 1/(2 n_j) sum_{i,l in C_j} |x_i - x_l|^2`.
double kmeans_cost_pairwise(const Dataset& data, const Partition& partition);

/**
 * @brief Lloyd's algorithm from `nstart` random-set initial partitions.
 *
 * Each restart draws a uniform label per point (fixing empty clusters by
 * moving random points out of clusters with more than one member), then
 * alternates centroid updates and nearest-centroid assignment. Assignment ties
 * go to the lowest cluster index. A cluster emptied during assignment is
 * reseeded with the point farthest from its centroid. The best restart wins,
 * ties resolved by the lower restart index, so serial and threaded runs agree.
 */
ClusteringResult lloyd_kmeans(const Dataset& data, const KmeansConfig& config);

/// Single Lloyd descent from a given labeling; exposes the per-iteration costs.
struct LloydTrace {
    std::vector<int> labels;
    std::vector<double> costs;
};
LloydTrace lloyd_descent(const Dataset& data, std::vector<int> labels, int k, int max_iters, double tolerance);

struct IdealResult {
    Partition partition;
    double cost = 0.0;
    /// Cost of the best partition different from the optimum (infinite when none exists).
    double second_cost = 0.0;
    bool unique = true;
    /// `(second_cost - cost) / cost`, or infinity for a zero-cost optimum with a positive runner-up.
    double relative_margin = 0.0;
};

inline constexpr std::size_t kIdealEnumerationCap = 14;

/// Exact k-means optimum by enumerating every partition into `k` non-empty parts.
IdealResult kmeans_ideal(const Dataset& data, int k, std::size_t cap = kIdealEnumerationCap);

struct LocalOptimumCheck {
    bool optimal = true;
    std::optional<std::size_t> point;
    std::optional<int> target_cluster;
};

/**
 * @brief Single-point move test.
 *
 * A partition is a local optimum when no point `x` of cluster `a` satisfies
 * `n_a/(n_a-1) |x-mu_a|^2 > n_b/(n_b+1) |x-mu_b|^2` for another cluster `b`.
 * Points of singleton clusters are skipped.
 */
LocalOptimumCheck is_local_optimum(const Dataset& data, const Partition& partition);

struct BisectConfig {
    int kmax = 8;
    /// Split only when `Q(split) / Q(cluster)` is below this ratio.
    double rel_decrease_threshold = 1.0 / 9.0;
};

struct SplitNode {
    std::vector<std::size_t> members;
    double cost = 0.0;
    /// `Q(split) / Q(node)` of the tested bisection; unset when no bisection was attempted.
    std::optional<double> split_ratio;
    int parent = -1;
    int left = -1;
    int right = -1;
    /// Flat cluster label for leaves, -1 for internal nodes.
    int label = -1;
};

struct BisectResult {
    Partition partition;
    std::vector<SplitNode> tree;
};

/// Recursive 2-means bisection with a relative cost-decrease stopping rule.
BisectResult bisectional_auto_kmeans(const Dataset& data, const BisectConfig& bcfg, const KmeansConfig& kcfg);

struct KmeansLMstResult {
    Partition partition;
    ClusteringResult kmeans;
    /// MST over the k-means centroids; node ids are k-means cluster labels.
    std::vector<Edge> center_tree;
    std::vector<Edge> removed_edges;
    /// Final cluster of every k-means cluster.
    std::vector<int> component_of;
};

/// k-means with `k`, then cut the `l - 1` heaviest edges of the centroid MST.
KmeansLMstResult kmeans_l_mst(const Dataset& data, int k, int l, const KmeansConfig& kcfg);

/// Same grouping step on an existing k-means clustering.
KmeansLMstResult group_by_center_tree(const Dataset& data, ClusteringResult kmeans, int l);

/// `m_d / (4 R_M + d_M)`.
double concave_lambda_bound(double max_radius, double max_center_distance, double min_gap);

/**
 * R_M is the largest k-means enclosing radius and d_M the largest distance
 * between k-means centroids lying in different final clusters.
 */
double concave_lambda_bound(const Dataset& data, const KmeansLMstResult& result, double min_gap);

}  // namespace clustcons

#endif
