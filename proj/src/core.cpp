#include "clustcons/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace clustcons {

Dataset::Dataset(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0) {
        throw ValidationError("dataset dimension must be positive");
    }
    if (coords_.size() % dim_ != 0) {
        throw ValidationError("coordinate count " + std::to_string(coords_.size()) +
                              " is not a multiple of dimension " + std::to_string(dim_));
    }
    n_ = coords_.size() / dim_;
    if (n_ < 2) {
        throw ValidationError("a dataset needs at least 2 points, got " + std::to_string(n_));
    }
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (!std::isfinite(coords_[i])) {
            throw ValidationError("non-finite coordinate at point " + std::to_string(i / dim_) + ", axis " +
                                  std::to_string(i % dim_));
        }
    }
}

Dataset Dataset::from_rows(const std::vector<Point>& rows) {
    if (rows.empty()) {
        throw ValidationError("a dataset needs at least 2 points, got 0");
    }
    const std::size_t dim = rows.front().size();
    std::vector<double> coords;
    coords.reserve(rows.size() * dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim) {
            throw ValidationError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                  " coordinates, expected " + std::to_string(dim));
        }
        coords.insert(coords.end(), rows[i].begin(), rows[i].end());
    }
    return Dataset(dim, std::move(coords));
}

Dataset Dataset::with_coords(std::vector<double> coords) const {
    if (coords.size() != coords_.size()) {
        throw ValidationError("replacement coordinates change the point count or dimension");
    }
    return Dataset(dim_, std::move(coords));
}

Partition Partition::from_labels(const Dataset& data, std::vector<int> labels) {
    int k = 0;
    for (int l : labels) {
        k = std::max(k, l + 1);
    }
    return Partition(data, std::move(labels), k);
}

Partition::Partition(const Dataset& data, std::vector<int> labels, int k)
    : dim_(data.dim()), k_(k), labels_(std::move(labels)) {
    if (labels_.size() != data.size()) {
        throw ValidationError("partition has " + std::to_string(labels_.size()) + " labels for " +
                              std::to_string(data.size()) + " points");
    }
    if (k_ < 1) {
        throw ValidationError("partition needs at least one cluster");
    }
    const auto uk = static_cast<std::size_t>(k_);
    sizes_.assign(uk, 0);
    members_.assign(uk, {});
    centroids_.assign(uk * dim_, 0.0);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        const int l = labels_[i];
        if (l < 0 || l >= k_) {
            throw ValidationError("label " + std::to_string(l) + " of point " + std::to_string(i) +
                                  " is outside 0.." + std::to_string(k_ - 1));
        }
        const auto ul = static_cast<std::size_t>(l);
        ++sizes_[ul];
        members_[ul].push_back(i);
        auto p = data.point(i);
        for (std::size_t d = 0; d < dim_; ++d) {
            centroids_[ul * dim_ + d] += p[d];
        }
    }
    for (std::size_t j = 0; j < uk; ++j) {
        if (sizes_[j] == 0) {
            throw ValidationError("cluster " + std::to_string(j) + " is empty");
        }
        for (std::size_t d = 0; d < dim_; ++d) {
            centroids_[j * dim_ + d] /= static_cast<double>(sizes_[j]);
        }
    }
    radii_.assign(uk, 0.0);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        const auto ul = static_cast<std::size_t>(labels_[i]);
        radii_[ul] = std::max(radii_[ul], std::sqrt(squared_distance(data.point(i), centroid(labels_[i]))));
    }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ValidationError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()));
    }
    return std::sqrt(squared_distance(a, b));
}

Point centroid(const Dataset& data, std::span<const std::size_t> member_ids) {
    if (member_ids.empty()) {
        throw ValidationError("centroid of an empty member set");
    }
    Point c(data.dim(), 0.0);
    for (std::size_t id : member_ids) {
        if (id >= data.size()) {
            throw ValidationError("member id " + std::to_string(id) + " out of range");
        }
        auto p = data.point(id);
        for (std::size_t d = 0; d < c.size(); ++d) {
            c[d] += p[d];
        }
    }
    for (double& v : c) {
        v /= static_cast<double>(member_ids.size());
    }
    return c;
}

double enclosing_radius(const Dataset& data, const Partition& partition, int cluster_id) {
    if (cluster_id < 0 || cluster_id >= partition.k()) {
        throw ValidationError("cluster id " + std::to_string(cluster_id) + " out of range");
    }
    if (partition.size() != data.size()) {
        throw ValidationError("partition does not match dataset");
    }
    const auto& members = partition.members(cluster_id);
    const Point mu = centroid(data, members);
    double r2 = 0.0;
    for (std::size_t i : members) {
        r2 = std::max(r2, squared_distance(data.point(i), mu));
    }
    return std::sqrt(r2);
}

namespace {

// Minimum-cost perfect assignment on a square matrix (Hungarian method with
// potentials). Returns the column assigned to each row.
std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= n; ++j) {
        if (p[j] != 0) {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    return row_to_col;
}

}  // namespace

std::size_t disagreement_count(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) {
        throw ValidationError("label vectors differ in length: " + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()));
    }
    if (a.empty()) {
        return 0;
    }
    const int ka = *std::max_element(a.begin(), a.end()) + 1;
    const int kb = *std::max_element(b.begin(), b.end()) + 1;
    if (*std::min_element(a.begin(), a.end()) < 0 || *std::min_element(b.begin(), b.end()) < 0) {
        throw ValidationError("negative cluster label");
    }
    const auto side = static_cast<std::size_t>(std::max(ka, kb));
    std::vector<std::vector<double>> agreement(side, std::vector<double>(side, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        agreement[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])] += 1.0;
    }
    std::vector<std::vector<double>> cost(side, std::vector<double>(side, 0.0));
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            cost[r][c] = -agreement[r][c];
        }
    }
    const auto match = min_cost_assignment(cost);
    double matched = 0.0;
    for (std::size_t r = 0; r < side; ++r) {
        matched += agreement[r][match[r]];
    }
    return a.size() - static_cast<std::size_t>(std::llround(matched));
}

std::size_t disagreement_count(const Partition& a, const Partition& b) {
    return disagreement_count(std::span<const int>(a.labels()), std::span<const int>(b.labels()));
}

int select_central_cluster(const Partition& partition) {
    if (partition.k() < 2) {
        throw ValidationError("central cluster selection needs k >= 2");
    }
    int best = 0;
    double best_sum = std::numeric_limits<double>::infinity();
    for (int j = 0; j < partition.k(); ++j) {
        double s = 0.0;
        for (int l = 0; l < partition.k(); ++l) {
            if (l != j) {
                s += squared_distance(partition.centroid(j), partition.centroid(l));
            }
        }
        if (s < best_sum) {
            best_sum = s;
            best = j;
        }
    }
    return best;
}

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool DisjointSets::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) {
        return false;
    }
    if (size_[a] < size_[b]) {
        std::swap(a, b);
    }
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
}

std::vector<Edge> minimum_spanning_tree(std::span<const double> coords, std::size_t dim) {
    if (dim == 0 || coords.size() % dim != 0 || coords.empty()) {
        throw ValidationError("minimum spanning tree needs at least one node of positive dimension");
    }
    const std::size_t n = coords.size() / dim;
    auto node = [&](std::size_t i) { return coords.subspan(i * dim, dim); };

    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            edges.push_back({i, j, std::sqrt(squared_distance(node(i), node(j)))});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        if (x.weight != y.weight) {
            return x.weight < y.weight;
        }
        if (x.u != y.u) {
            return x.u < y.u;
        }
        return x.v < y.v;
    });

    DisjointSets sets(n);
    std::vector<Edge> tree;
    tree.reserve(n - 1);
    for (const Edge& e : edges) {
        if (sets.unite(e.u, e.v)) {
            tree.push_back(e);
            if (tree.size() + 1 == n) {
                break;
            }
        }
    }
    return tree;
}

std::vector<Edge> minimum_spanning_tree(const Dataset& data) {
    return minimum_spanning_tree(std::span<const double>(data.coords()), data.dim());
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace clustcons
