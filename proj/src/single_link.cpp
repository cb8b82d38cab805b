#include "clustcons/single_link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace clustcons {

SingleLinkResult single_link_k(const Dataset& data, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > data.size()) {
        throw ValidationError("k = " + std::to_string(k) + " must lie in 1.." + std::to_string(data.size()));
    }
    const std::vector<Edge> mst = minimum_spanning_tree(data);

    std::vector<std::size_t> order(mst.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Edge& x = mst[a];
        const Edge& y = mst[b];
        if (x.weight != y.weight) {
            return x.weight > y.weight;
        }
        if (x.u != y.u) {
            return x.u < y.u;
        }
        return x.v < y.v;
    });
    std::vector<bool> cut(mst.size(), false);
    for (int c = 0; c < k - 1; ++c) {
        cut[order[static_cast<std::size_t>(c)]] = true;
    }

    DisjointSets sets(data.size());
    for (std::size_t e = 0; e < mst.size(); ++e) {
        if (!cut[e]) {
            sets.unite(mst[e].u, mst[e].v);
        }
    }
    std::vector<int> root_label(data.size(), -1);
    std::vector<int> labels(data.size());
    int next = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::size_t r = sets.find(i);
        if (root_label[r] < 0) {
            root_label[r] = next++;
        }
        labels[i] = root_label[r];
    }
    Partition partition(data, labels, next);

    std::vector<LinkTree> trees(static_cast<std::size_t>(next));
    for (int j = 0; j < next; ++j) {
        trees[static_cast<std::size_t>(j)].cluster = j;
        trees[static_cast<std::size_t>(j)].members = partition.members(j);
    }
    for (std::size_t e = 0; e < mst.size(); ++e) {
        if (!cut[e]) {
            trees[static_cast<std::size_t>(labels[mst[e].u])].edges.push_back(mst[e]);
        }
    }
    for (auto& t : trees) {
        t = rebuild_link_tree(data, t);
    }
    return SingleLinkResult{std::move(partition), std::move(trees)};
}

LinkTree rebuild_link_tree(const Dataset& data, const LinkTree& tree) {
    LinkTree out = tree;
    out.longest_incident.assign(out.members.size(), 0.0);
    auto slot = [&](std::size_t id) {
        auto it = std::lower_bound(out.members.begin(), out.members.end(), id);
        if (it == out.members.end() || *it != id) {
            throw ValidationError("tree edge endpoint " + std::to_string(id) + " is not a cluster member");
        }
        return static_cast<std::size_t>(it - out.members.begin());
    };
    for (Edge& e : out.edges) {
        e.weight = euclidean_distance(data.point(e.u), data.point(e.v));
        const std::size_t a = slot(e.u);
        const std::size_t b = slot(e.v);
        out.longest_incident[a] = std::max(out.longest_incident[a], e.weight);
        out.longest_incident[b] = std::max(out.longest_incident[b], e.weight);
    }
    return out;
}

ClusterArea cluster_area(const Dataset& data, const LinkTree& tree) {
    ClusterArea area;
    area.balls.reserve(tree.members.size());
    for (std::size_t m = 0; m < tree.members.size(); ++m) {
        auto p = data.point(tree.members[m]);
        area.balls.push_back({Point(p.begin(), p.end()), tree.longest_incident[m]});
    }
    return area;
}

double distance_to_area(std::span<const double> x, const ClusterArea& area) {
    double best = std::numeric_limits<double>::infinity();
    for (const Ball& b : area.balls) {
        best = std::min(best, std::max(0.0, euclidean_distance(x, b.center) - b.radius));
    }
    return best;
}

namespace {

void validate_trees(const Dataset& data, const Partition& partition, const std::vector<LinkTree>& trees) {
    if (partition.size() != data.size()) {
        throw ValidationError("partition does not match dataset");
    }
    if (trees.size() != static_cast<std::size_t>(partition.k())) {
        throw ValidationError("expected one link tree per cluster");
    }
    for (int j = 0; j < partition.k(); ++j) {
        const LinkTree& t = trees[static_cast<std::size_t>(j)];
        if (t.cluster != j || t.members != partition.members(j)) {
            throw ValidationError("link tree " + std::to_string(j) + " does not span its cluster");
        }
        if (t.edges.size() + 1 != t.members.size() || t.longest_incident.size() != t.members.size()) {
            throw ValidationError("link tree " + std::to_string(j) + " is not a spanning tree");
        }
        DisjointSets sets(data.size());
        for (const Edge& e : t.edges) {
            if (e.u >= data.size() || e.v >= data.size() || partition.label(e.u) != j ||
                partition.label(e.v) != j) {
                throw ValidationError("link tree " + std::to_string(j) + " has an edge leaving the cluster");
            }
            if (!sets.unite(e.u, e.v)) {
                throw ValidationError("link tree " + std::to_string(j) + " contains a cycle");
            }
        }
    }
}

double longest_incident_of(const std::vector<LinkTree>& trees, const Partition& partition, std::size_t id) {
    const LinkTree& t = trees[static_cast<std::size_t>(partition.label(id))];
    auto it = std::lower_bound(t.members.begin(), t.members.end(), id);
    return t.longest_incident[static_cast<std::size_t>(it - t.members.begin())];
}

}  // namespace

SeparationCheck check_link_ball_separation(const Dataset& data, const Partition& partition,
                                           const std::vector<LinkTree>& trees, int cluster_id) {
    validate_trees(data, partition, trees);
    if (cluster_id < 0 || cluster_id >= partition.k()) {
        throw ValidationError("cluster id " + std::to_string(cluster_id) + " out of range");
    }
    const ClusterArea area = cluster_area(data, trees[static_cast<std::size_t>(cluster_id)]);
    SeparationCheck check;
    check.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (partition.label(i) == cluster_id) {
            continue;
        }
        const double slack = distance_to_area(data.point(i), area) - longest_incident_of(trees, partition, i);
        if (slack < check.margin) {
            check.margin = slack;
        }
        if (!(slack > 0.0) && check.separated) {
            check.separated = false;
            check.violating_node = i;
        }
    }
    return check;
}

bool link_ball_separated(const Dataset& data, const Partition& partition, const std::vector<LinkTree>& trees,
                         int cluster_id) {
    return check_link_ball_separation(data, partition, trees, cluster_id).separated;
}

SemiCentricResult semi_centric_transform(const Dataset& data, const Partition& partition,
                                         const std::vector<LinkTree>& trees, const SemiCentricSpec& spec) {
    validate_trees(data, partition, trees);
    if (spec.cluster_id < 0 || spec.cluster_id >= partition.k()) {
        throw ValidationError("cluster id " + std::to_string(spec.cluster_id) + " out of range");
    }
    if (!(spec.lambda > 0.0 && spec.lambda <= 1.0)) {
        throw ValidationError("semi-centric lambda must lie in (0, 1)");
    }
    if (spec.node >= data.size() || partition.label(spec.node) != spec.cluster_id) {
        throw ValidationError("node " + std::to_string(spec.node) + " is not in cluster " +
                              std::to_string(spec.cluster_id));
    }
    const LinkTree& tree = trees[static_cast<std::size_t>(spec.cluster_id)];
    if (tree.members.size() < 2) {
        throw RefusalError("a singleton cluster has no edge to move along");
    }
    const SeparationCheck sep = check_link_ball_separation(data, partition, trees, spec.cluster_id);
    if (!sep.separated) {
        throw RefusalError("cluster " + std::to_string(spec.cluster_id) +
                           " is not link-ball-separated (node " + std::to_string(*sep.violating_node) + ")");
    }

    std::vector<std::size_t> neighbours;
    for (const Edge& e : tree.edges) {
        if (e.u == spec.node) {
            neighbours.push_back(e.v);
        } else if (e.v == spec.node) {
            neighbours.push_back(e.u);
        }
    }

    std::size_t anchor = 0;
    std::size_t root = 0;
    if (spec.branch_root) {
        if (std::find(neighbours.begin(), neighbours.end(), *spec.branch_root) == neighbours.end()) {
            throw ValidationError("branch root " + std::to_string(*spec.branch_root) + " is not adjacent to node " +
                                  std::to_string(spec.node));
        }
        anchor = spec.node;
        root = *spec.branch_root;
    } else {
        if (neighbours.size() != 1) {
            throw ValidationError("node " + std::to_string(spec.node) +
                                  " is not a leaf; name the branch root to move a branch");
        }
        anchor = neighbours.front();
        root = spec.node;
    }

    // The branch is everything reachable from the root without crossing the anchor edge.
    DisjointSets sets(data.size());
    for (const Edge& e : tree.edges) {
        const bool anchor_edge = (e.u == anchor && e.v == root) || (e.u == root && e.v == anchor);
        if (!anchor_edge) {
            sets.unite(e.u, e.v);
        }
    }
    std::vector<std::size_t> moved;
    for (std::size_t id : tree.members) {
        if (sets.find(id) == sets.find(root)) {
            moved.push_back(id);
        }
    }

    const std::size_t dim = data.dim();
    std::vector<double> coords = data.coords();
    if (spec.lambda != 1.0) {
        auto a = data.point(anchor);
        auto r = data.point(root);
        for (std::size_t id : moved) {
            for (std::size_t d = 0; d < dim; ++d) {
                coords[id * dim + d] += (spec.lambda - 1.0) * (r[d] - a[d]);
            }
        }
    }
    Dataset moved_data = data.with_coords(std::move(coords));

    std::vector<LinkTree> new_trees = trees;
    LinkTree& changed = new_trees[static_cast<std::size_t>(spec.cluster_id)];
    changed = rebuild_link_tree(moved_data, tree);

    // Every moved ball must stay inside one ball of the original area.
    const ClusterArea original = cluster_area(data, tree);
    for (std::size_t id : moved) {
        auto it = std::lower_bound(changed.members.begin(), changed.members.end(), id);
        const double radius = changed.longest_incident[static_cast<std::size_t>(it - changed.members.begin())];
        bool inside = false;
        for (const Ball& b : original.balls) {
            const double reach = euclidean_distance(moved_data.point(id), b.center) + radius;
            if (reach <= b.radius * (1.0 + kDistanceTolerance) + kDistanceTolerance * radius) {
                inside = true;
                break;
            }
        }
        if (!inside) {
            throw RefusalError("moved node " + std::to_string(id) + " would leave the original cluster area");
        }
    }

    nlohmann::json prov = {{"kind", "semi-centric"},
                           {"cluster", spec.cluster_id},
                           {"lambda", spec.lambda},
                           {"anchor", anchor},
                           {"branch_root", root},
                           {"moved", moved},
                           {"branch_motion", "rigid translation along the anchor edge"}};
    return SemiCentricResult{TransformResult{std::move(moved_data), std::move(prov), partition}, std::move(new_trees),
                             std::move(moved)};
}

}  // namespace clustcons
