#ifndef CLUSTCONS_CORE_HPP
#define CLUSTCONS_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * @file core.hpp
 *
 * @brief Datasets, partitions and the geometry shared by every other module.
 */

namespace clustcons {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: wrong dimensions, labels out of range, parameters outside their domain.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Input is well-formed but the operation declines to run on it (enumeration caps, degenerate geometry).
class RefusalError : public Error {
public:
    using Error::Error;
};

/// Dataset files that cannot be read or yield no usable rows.
class IngestionError : public Error {
public:
    using Error::Error;
};

/// Output files that cannot be written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Relative tolerance used by every distance comparison in the checkers.
inline constexpr double kDistanceTolerance = 1e-9;

using Point = std::vector<double>;

/**
 * @brief Ordered set of points in m-dimensional Euclidean space.
 *
 * Points are stored row-major. The id of a point is its row index and never
 * changes under the transforms, which only produce new coordinates.
 */
class Dataset {
public:
    /**
     * @param dim Number of coordinates per point, at least 1.
     * @param coords Row-major coordinates, `n * dim` finite values with `n >= 2`.
     */
    Dataset(std::size_t dim, std::vector<double> coords);

    static Dataset from_rows(const std::vector<Point>& rows);

    std::size_t size() const { return n_; }
    std::size_t dim() const { return dim_; }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }

    const std::vector<double>& coords() const { return coords_; }

    /// Same ids and dimension, new coordinates.
    Dataset with_coords(std::vector<double> coords) const;

    bool operator==(const Dataset&) const = default;

private:
    std::size_t dim_;
    std::size_t n_;
    std::vector<double> coords_;
};

enum class PairClass { IntraCluster, InterCluster };

/**
 * @brief Assignment of every point to one of `k` non-empty clusters, with the
 * per-cluster statistics derived from the dataset it was built on.
 */
class Partition {
public:
    /// `k` is taken as `max(label) + 1`; every cluster must be non-empty.
    static Partition from_labels(const Dataset& data, std::vector<int> labels);

    Partition(const Dataset& data, std::vector<int> labels, int k);

    /// Recompute centroids and radii against new coordinates for the same labels.
    Partition rebind(const Dataset& data) const { return Partition(data, labels_, k_); }

    int k() const { return k_; }
    std::size_t size() const { return labels_.size(); }
    const std::vector<int>& labels() const { return labels_; }
    int label(std::size_t i) const { return labels_[i]; }

    std::span<const double> centroid(int j) const {
        return {centroids_.data() + static_cast<std::size_t>(j) * dim_, dim_};
    }
    const std::vector<std::size_t>& sizes() const { return sizes_; }
    const std::vector<double>& radii() const { return radii_; }
    const std::vector<std::size_t>& members(int j) const { return members_[static_cast<std::size_t>(j)]; }

    PairClass pair_class(std::size_t a, std::size_t b) const {
        return labels_[a] == labels_[b] ? PairClass::IntraCluster : PairClass::InterCluster;
    }

private:
    std::size_t dim_ = 0;
    int k_ = 0;
    std::vector<int> labels_;
    std::vector<double> centroids_;
    std::vector<std::size_t> sizes_;
    std::vector<double> radii_;
    std::vector<std::vector<std::size_t>> members_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Euclidean distance; throws ValidationError when the dimensions differ.
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Arithmetic mean of the selected points.
Point centroid(const Dataset& data, std::span<const std::size_t> member_ids);

/// Largest distance from a member of `cluster_id` to its centroid.
double enclosing_radius(const Dataset& data, const Partition& partition, int cluster_id);

/**
 * @brief Number of points whose cluster differs between two labelings after
 * the best one-to-one matching of cluster labels.
 *
 * The matching maximizes the total agreement of the `k_a x k_b` confusion
 * matrix (Hungarian method), so relabeled copies of the same partition
 * compare equal. The label vectors must have equal length.
 */
std::size_t disagreement_count(std::span<const int> a, std::span<const int> b);
std::size_t disagreement_count(const Partition& a, const Partition& b);

/// Cluster whose centroid has the smallest sum of squared distances to all other centroids.
int select_central_cluster(const Partition& partition);

struct Edge {
    std::size_t u;
    std::size_t v;
    double weight;

    bool operator==(const Edge&) const = default;
};

/**
 * @brief Euclidean minimum spanning tree over `coords.size() / dim` nodes.
 *
 * Kruskal over the complete graph with edges ordered by (weight, u, v), so
 * ties resolve toward the lexicographically smaller index pair. Edges are
 * returned in acceptance order with `u < v`.
 */
std::vector<Edge> minimum_spanning_tree(std::span<const double> coords, std::size_t dim);
std::vector<Edge> minimum_spanning_tree(const Dataset& data);

/// Deterministic 64-bit seed mixing (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Disjoint-set forest with path halving and union by size.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n);
    std::size_t find(std::size_t x);
    bool unite(std::size_t a, std::size_t b);

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

}  // namespace clustcons

#endif
