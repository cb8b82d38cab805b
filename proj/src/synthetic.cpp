#include "clustcons/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace clustcons {

LabeledDataset gaussian_blobs(const std::vector<Point>& centers, std::size_t per_cluster, double sigma,
                              std::uint64_t seed) {
    if (centers.empty() || per_cluster == 0) {
        throw ValidationError("blobs need at least one center and one point per cluster");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    std::vector<double> coords;
    std::vector<int> labels;
    const std::size_t dim = centers.front().size();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        if (centers[c].size() != dim) {
            throw ValidationError("blob centers differ in dimension");
        }
        for (std::size_t p = 0; p < per_cluster; ++p) {
            for (std::size_t d = 0; d < dim; ++d) {
                coords.push_back(centers[c][d] + gauss(rng));
            }
            labels.push_back(static_cast<int>(c));
        }
    }
    return {Dataset(dim, std::move(coords)), std::move(labels)};
}

LabeledDataset dim_set(std::size_t dim, std::size_t clusters, std::size_t per_cluster, std::uint64_t seed,
                       double sigma) {
    std::mt19937_64 rng(mix_seed(seed, 0));
    std::uniform_real_distribution<double> spread(0.0, 200.0);
    std::vector<Point> centers(clusters, Point(dim));
    for (auto& c : centers) {
        for (auto& v : c) {
            v = spread(rng);
        }
    }
    return gaussian_blobs(centers, per_cluster, sigma, mix_seed(seed, 1));
}

std::vector<Point> uniform_disk(const Point& center, double radius, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double r = radius * std::sqrt(unit(rng));
        const double t = 2.0 * std::numbers::pi * unit(rng);
        out.push_back({center[0] + r * std::cos(t), center[1] + r * std::sin(t)});
    }
    return out;
}

LabeledDataset two_moons(std::size_t per_moon, double offset, double noise, std::uint64_t seed) {
    if (per_moon < 2) {
        throw ValidationError("two moons need at least 2 points per moon");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, noise > 0.0 ? noise : 1.0);
    auto jitter = [&] { return noise > 0.0 ? gauss(rng) : 0.0; };
    std::vector<double> coords;
    std::vector<int> labels;
    for (int moon = 0; moon < 2; ++moon) {
        for (std::size_t i = 0; i < per_moon; ++i) {
            const double t = std::numbers::pi * static_cast<double>(i) / static_cast<double>(per_moon - 1);
            const double x = moon == 0 ? std::cos(t) : 1.0 - std::cos(t);
            const double y = moon == 0 ? std::sin(t) : offset - std::sin(t);
            coords.push_back(x + jitter());
            coords.push_back(y + jitter());
            labels.push_back(moon);
        }
    }
    return {Dataset(2, std::move(coords)), std::move(labels)};
}

Dataset uniform_cube(std::size_t n, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> coords(n * dim);
    for (auto& v : coords) {
        v = unit(rng);
    }
    return Dataset(dim, std::move(coords));
}

}  // namespace clustcons
