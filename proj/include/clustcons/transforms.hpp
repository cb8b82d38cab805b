#ifndef CLUSTCONS_TRANSFORMS_HPP
#define CLUSTCONS_TRANSFORMS_HPP

#include "clustcons/core.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

/**
 * @file transforms.hpp
 *
 * @brief Cluster-preserving dataset transformations: centric shrinking,
 * radius equalization, radial separation and rigid per-cluster motions.
 */

namespace clustcons {

/**
 * @brief Contraction of (part of) one cluster toward a center.
 *
 * Without a subset the center is the cluster centroid; with a subset only the
 * subset moves, toward its own centroid. An axis mask restricts the
 * contraction to the selected coordinates (homothety in a subspace).
 */
struct CentricSpec {
    int cluster_id = 0;
    double lambda = 1.0;
    std::optional<std::vector<std::size_t>> subset;
    std::optional<std::vector<bool>> axis_mask;
};

struct RigidMotion {
    std::vector<double> translation;
    /// Row-major `dim x dim` orthogonal matrix applied about the cluster centroid.
    std::vector<double> rotation;
};

struct MotionSpec {
    /// One motion per cluster.
    std::vector<RigidMotion> motions;
    /// Cluster left in place regardless of its entry in `motions`.
    std::optional<int> reference_cluster;
};

struct TransformResult {
    Dataset dataset;
    nlohmann::json provenance;
    Partition baseline_partition;
};

/// `x' = c + lambda (x - c)` for the affected points; every other point is copied.
TransformResult centric_transform(const Dataset& data, const Partition& partition, const CentricSpec& spec);

struct EqualizedRadii {
    TransformResult result;
    double common_radius = 0.0;
    std::vector<double> lambdas;
};

/// Shrinks every cluster to the smallest enclosing radius.
EqualizedRadii equalize_radii(const Dataset& data, const Partition& partition);

struct RadialSeparation {
    TransformResult result;
    /// Inter-cluster pairs whose distance decreased, from a full pairwise scan.
    std::size_t decreased_pairs = 0;
};

/// Translates every non-reference cluster by `(stretch - 1) (mu_j - mu_ref)`.
RadialSeparation radial_separation(const Dataset& data, const Partition& partition, int reference_cluster,
                                   double stretch);

/// Smallest stretch that adds at least `gap` to every pairwise centroid distance.
double stretch_for_gap(const Partition& partition, double gap);

/// Largest enclosing radius over all clusters.
double max_enclosing_radius(const Partition& partition);

/// Uniform shrink factor `min(1, d_min / (6 R0))`.
double motion_safe_lambda(double equalized_radius, double min_center_distance);

/// Result of `ensure_motion_safe`; the baseline that `motion_safe` checks against.
struct MotionBaseline {
    TransformResult result;
    double equalized_radius = 0.0;
    double shrink = 1.0;
    double safe_radius = 0.0;
    double min_center_distance = 0.0;
    /// Row-major `k x k` centroid distances of the baseline configuration.
    std::vector<double> center_distances;
};

/// Baseline of an arbitrary configuration: its centroid distances, radius = the largest enclosing radius.
MotionBaseline make_motion_baseline(const Dataset& data, const Partition& partition, nlohmann::json provenance = {});

/**
 * @brief Equalizes radii, then shrinks all clusters uniformly until
 * `4 R_safe <= d_min - 2 R_safe`.
 *
 * Throws RefusalError when two centroids coincide.
 */
MotionBaseline ensure_motion_safe(const Dataset& data, const Partition& partition);

/**
 * @brief True when no centroid distance fell below its baseline value and
 * every cluster is a rigid image of its baseline point set.
 */
bool motion_safe(const Dataset& current, const MotionBaseline& baseline);

/// `x -> Rot_j (x - mu_j) + mu_j + t_j` for each cluster `j`.
TransformResult apply_motion(const Dataset& data, const Partition& partition, const MotionSpec& spec);

/**
 * @brief Random translation of every non-reference cluster: a uniform unit
 * direction and a length uniform in `(0, step_max]`. Rotations are identity.
 */
MotionSpec random_motion_step(const Dataset& data, const Partition& partition, std::uint64_t seed, double step_max,
                              int reference_cluster);

/// Uniformly random orthogonal matrix (QR of a Gaussian matrix), row-major.
std::vector<double> random_rotation(std::size_t dim, std::uint64_t seed);

std::vector<double> identity_rotation(std::size_t dim);

}  // namespace clustcons

#endif
