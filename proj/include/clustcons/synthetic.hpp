#ifndef CLUSTCONS_SYNTHETIC_HPP
#define CLUSTCONS_SYNTHETIC_HPP

#include "clustcons/core.hpp"

#include <cstdint>
#include <vector>

// Labeled synthetic datasets for tests, the acceptance suite and the CLI.

namespace clustcons {

struct LabeledDataset {
    Dataset data;
    std::vector<int> labels;
};

/// Isotropic Gaussian blobs, `per_cluster` points around each center.
LabeledDataset gaussian_blobs(const std::vector<Point>& centers, std::size_t per_cluster, double sigma,
                              std::uint64_t seed);

/**
 * @brief High-dimensional benchmark in the style of the "dim" sets: `clusters`
 * well separated Gaussian clusters of `per_cluster` points in `dim`
 * dimensions, centers uniform in `[0, 200]^dim`, unit-free spread `sigma`.
 */
LabeledDataset dim_set(std::size_t dim, std::size_t clusters, std::size_t per_cluster, std::uint64_t seed,
                       double sigma = 5.0);

/// Points uniform inside a 2D disk.
std::vector<Point> uniform_disk(const Point& center, double radius, std::size_t count, std::uint64_t seed);

/**
 * @brief Interleaved half circles: `(cos t, sin t)` and `(1 - cos t, offset - sin t)`
 * for `t` evenly spaced in `[0, pi]`, plus Gaussian noise.
 */
LabeledDataset two_moons(std::size_t per_moon, double offset, double noise, std::uint64_t seed);

/// `n` points uniform in `[0, 1]^dim`.
Dataset uniform_cube(std::size_t n, std::size_t dim, std::uint64_t seed);

}  // namespace clustcons

#endif
