#ifndef CLUSTCONS_SINGLE_LINK_HPP
#define CLUSTCONS_SINGLE_LINK_HPP

#include "clustcons/core.hpp"
#include "clustcons/transforms.hpp"

#include <optional>
#include <vector>

namespace clustcons {

/// Spanning tree of one single-link cluster, in global point ids.
struct LinkTree {
    int cluster = 0;
    std::vector<std::size_t> members;
    std::vector<Edge> edges;
    /// Longest tree edge incident with each member (0 for a singleton), aligned with `members`.
    std::vector<double> longest_incident;
};

struct Ball {
    Point center;
    double radius = 0.0;
};

/// Union of one ball per member, radius = the member's longest incident tree edge.
struct ClusterArea {
    std::vector<Ball> balls;
};

struct SingleLinkResult {
    Partition partition;
    std::vector<LinkTree> trees;
};

/// Cut the `k - 1` heaviest MST edges; clusters are numbered by their smallest point id.
SingleLinkResult single_link_k(const Dataset& data, int k);

/// Rebuild a tree's weights and radii from current coordinates, keeping its edges.
LinkTree rebuild_link_tree(const Dataset& data, const LinkTree& tree);

ClusterArea cluster_area(const Dataset& data, const LinkTree& tree);

/// `min_b max(0, |x - c_b| - r_b)`.
double distance_to_area(std::span<const double> x, const ClusterArea& area);

struct SeparationCheck {
    bool separated = true;
    std::optional<std::size_t> violating_node;
    /// Smallest `distance_to_area - longest_incident` over outside nodes.
    double margin = 0.0;
};

SeparationCheck check_link_ball_separation(const Dataset& data, const Partition& partition,
                                           const std::vector<LinkTree>& trees, int cluster_id);

/// True when every node outside the cluster is farther from its area than its own longest incident edge.
bool link_ball_separated(const Dataset& data, const Partition& partition, const std::vector<LinkTree>& trees,
                         int cluster_id);

/**
 * @brief Move a leaf toward its tree neighbour, or translate a branch toward
 * its anchor.
 *
 * For a leaf `node` the leaf moves along its edge so that the edge length
 * scales by `lambda`. With `branch_root` set, `node` is the anchor and every
 * node on the `branch_root` side of the edge `(node, branch_root)` is translated
 * rigidly by `(lambda - 1)(branch_root - node)`.
 */
struct SemiCentricSpec {
    int cluster_id = 0;
    std::size_t node = 0;
    double lambda = 0.5;
    std::optional<std::size_t> branch_root;
};

struct SemiCentricResult {
    TransformResult result;
    /// Trees of all clusters evaluated on the new coordinates; edges unchanged.
    std::vector<LinkTree> trees;
    std::vector<std::size_t> moved;
};

/**
 * Refuses (RefusalError) when the cluster is not link-ball-separated or when a
 * moved node's ball would leave the original cluster area.
 */
SemiCentricResult semi_centric_transform(const Dataset& data, const Partition& partition,
                                         const std::vector<LinkTree>& trees, const SemiCentricSpec& spec);

}  // namespace clustcons

#endif
