#include "clustcons/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace clustcons {

std::string to_string(GammaClass c) {
    switch (c) {
        case GammaClass::FullGamma:
            return "FullGamma";
        case GammaClass::InnerOnly:
            return "InnerOnly";
        case GammaClass::OuterOnly:
            return "OuterOnly";
        case GammaClass::NotGamma:
            return "NotGamma";
    }
    return "NotGamma";
}

namespace {

void check_pair(const Dataset& before, const Dataset& after) {
    if (before.size() != after.size() || before.dim() != after.dim()) {
        throw ValidationError("before/after datasets differ in point count or dimension");
    }
}

void check_pair(const Dataset& before, const Dataset& after, const Partition& partition) {
    check_pair(before, after);
    if (partition.size() != before.size()) {
        throw ValidationError("partition does not match the datasets");
    }
}

double dist(const Dataset& data, std::size_t a, std::size_t b) {
    return std::sqrt(squared_distance(data.point(a), data.point(b)));
}

bool decreased(double before, double after) { return after < before * (1.0 - kDistanceTolerance); }
bool increased(double before, double after) { return after > before * (1.0 + kDistanceTolerance); }

// Partial Fisher-Yates: the first `count` entries become a uniform sample.
std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t count,
                                                    std::mt19937_64& rng) {
    count = std::min(count, pool.size());
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(count);
    return pool;
}

}  // namespace

ViolationReport classify_gamma(const Dataset& before, const Dataset& after, const Partition& partition) {
    check_pair(before, after, partition);
    ViolationReport r;
    for (std::size_t a = 0; a < before.size(); ++a) {
        for (std::size_t b = a + 1; b < before.size(); ++b) {
            const double d0 = dist(before, a, b);
            const double d1 = dist(after, a, b);
            const bool changed = decreased(d0, d1) || increased(d0, d1);
            if (partition.label(a) == partition.label(b)) {
                ++r.intra_pairs;
                r.intra_increased += increased(d0, d1) ? 1 : 0;
                r.intra_changed += changed ? 1 : 0;
            } else {
                ++r.inter_pairs;
                r.inter_decreased += decreased(d0, d1) ? 1 : 0;
                r.inter_changed += changed ? 1 : 0;
            }
        }
    }
    r.violation_percentage =
        r.inter_pairs == 0 ? 0.0 : 100.0 * static_cast<double>(r.inter_decreased) / static_cast<double>(r.inter_pairs);
    if (r.intra_increased > 0 || r.inter_decreased > 0) {
        r.classification = GammaClass::NotGamma;
    } else if (r.inter_changed == 0 && r.intra_changed > 0) {
        r.classification = GammaClass::InnerOnly;
    } else if (r.intra_changed == 0 && r.inter_changed > 0) {
        r.classification = GammaClass::OuterOnly;
    } else {
        r.classification = GammaClass::FullGamma;
    }
    return r;
}

double sampled_violation_percentage(const Dataset& before, const Dataset& after, const Partition& partition,
                                    const SamplePlan& plan) {
    check_pair(before, after, partition);
    if (plan.target_cluster < 0 || plan.target_cluster >= partition.k()) {
        throw ValidationError("sample target cluster out of range");
    }
    if (plan.sample_in < 1 || plan.sample_out < 1) {
        throw ValidationError("sample sizes must be at least 1");
    }
    std::vector<std::size_t> inside = partition.members(plan.target_cluster);
    std::vector<std::size_t> outside;
    for (std::size_t i = 0; i < before.size(); ++i) {
        if (partition.label(i) != plan.target_cluster) {
            outside.push_back(i);
        }
    }
    if (outside.empty()) {
        throw ValidationError("no points outside the target cluster to sample");
    }
    std::mt19937_64 rng(plan.seed);
    inside = sample_without_replacement(std::move(inside), plan.sample_in, rng);
    outside = sample_without_replacement(std::move(outside), plan.sample_out, rng);

    std::size_t bad = 0;
    for (std::size_t a : inside) {
        for (std::size_t b : outside) {
            if (decreased(dist(before, a, b), dist(after, a, b))) {
                ++bad;
            }
        }
    }
    return 100.0 * static_cast<double>(bad) / static_cast<double>(inside.size() * outside.size());
}

GravitationalCheck gravitational_check(const Dataset& before, const Dataset& after, const Partition& partition,
                                       int cluster_id, std::size_t n_samples, std::uint64_t seed) {
    check_pair(before, after, partition);
    if (cluster_id < 0 || cluster_id >= partition.k()) {
        throw ValidationError("cluster id out of range");
    }
    const auto& members = partition.members(cluster_id);
    const std::size_t m = members.size();
    if (m < 2) {
        throw ValidationError("gravitational check needs a cluster with at least 2 points");
    }
    const std::size_t dim = before.dim();
    const double scale = enclosing_radius(before, partition, cluster_id);

    GravitationalCheck result;
    result.worst_violation = -std::numeric_limits<double>::infinity();
    std::vector<double> s0(4 * dim);
    std::vector<int> side(m);

    // side[t]: 0 = unused, 1 = first subset, 2 = second subset.
    auto evaluate = [&] {
        std::fill(s0.begin(), s0.end(), 0.0);
        double n1 = 0.0, n2 = 0.0;
        for (std::size_t t = 0; t < m; ++t) {
            if (side[t] == 0) {
                continue;
            }
            const std::size_t off = side[t] == 1 ? 0 : dim;
            auto pb = before.point(members[t]);
            auto pa = after.point(members[t]);
            for (std::size_t d = 0; d < dim; ++d) {
                s0[off + d] += pb[d];
                s0[2 * dim + off + d] += pa[d];
            }
            (side[t] == 1 ? n1 : n2) += 1.0;
        }
        double db = 0.0, da = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double gb = s0[d] / n1 - s0[dim + d] / n2;
            const double ga = s0[2 * dim + d] / n1 - s0[3 * dim + d] / n2;
            db += gb * gb;
            da += ga * ga;
        }
        db = std::sqrt(db);
        da = std::sqrt(da);
        ++result.pairs_checked;
        result.worst_violation = std::max(result.worst_violation, da - db);
        if (da > db + kDistanceTolerance * std::max(db, scale)) {
            result.consistent = false;
        }
    };

    if (m <= kGravitationalExhaustiveCap) {
        result.exhaustive = true;
        std::size_t total = 1;
        for (std::size_t t = 0; t < m; ++t) {
            total *= 3;
        }
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t c = code;
            bool has1 = false, has2 = false;
            int first = 0;
            for (std::size_t t = 0; t < m; ++t) {
                side[t] = static_cast<int>(c % 3);
                c /= 3;
                has1 = has1 || side[t] == 1;
                has2 = has2 || side[t] == 2;
                if (first == 0) {
                    first = side[t];
                }
            }
            // Each unordered pair once: the first used element belongs to S1.
            if (has1 && has2 && first == 1) {
                evaluate();
            }
        }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> pick(0, 2);
        for (std::size_t s = 0; s < n_samples; ++s) {
            bool has1 = false, has2 = false;
            while (!(has1 && has2)) {
                has1 = has2 = false;
                for (auto& v : side) {
                    v = pick(rng);
                    has1 = has1 || v == 1;
                    has2 = has2 || v == 2;
                }
            }
            evaluate();
        }
    }
    if (result.pairs_checked == 0) {
        result.worst_violation = 0.0;
    }
    return result;
}

bool convergent_check(const Dataset& before, const Dataset& after) {
    check_pair(before, after);
    const std::size_t n = before.size();
    if (n > kConvergentCap) {
        throw RefusalError("convergent check refuses n = " + std::to_string(n) + " (cap " +
                           std::to_string(kConvergentCap) + ")");
    }
    struct PairDist {
        double d0;
        double d1;
    };
    std::vector<PairDist> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            pairs.push_back({dist(before, a, b), dist(after, a, b)});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const PairDist& x, const PairDist& y) { return x.d0 < y.d0; });

    // Scan groups of equal original distance; each pair must dominate every pair
    // with smaller or equal original distance, including its own group.
    double max_after = -std::numeric_limits<double>::infinity();
    double min_ratio = std::numeric_limits<double>::infinity();
    std::size_t g = 0;
    while (g < pairs.size()) {
        std::size_t end = g;
        while (end < pairs.size() && pairs[end].d0 == pairs[g].d0) {
            ++end;
        }
        for (std::size_t p = g; p < end; ++p) {
            max_after = std::max(max_after, pairs[p].d1);
            if (pairs[p].d0 > 0.0) {
                min_ratio = std::min(min_ratio, pairs[p].d1 / pairs[p].d0);
            }
        }
        for (std::size_t p = g; p < end; ++p) {
            if (pairs[p].d1 < max_after * (1.0 - kDistanceTolerance)) {
                return false;
            }
            if (pairs[p].d0 > 0.0 && pairs[p].d1 / pairs[p].d0 > min_ratio * (1.0 + kDistanceTolerance)) {
                return false;
            }
        }
        g = end;
    }
    return true;
}

}  // namespace clustcons
