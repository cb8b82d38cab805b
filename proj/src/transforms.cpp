#include "clustcons/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace clustcons {

namespace {

void check_partition(const Dataset& data, const Partition& partition) {
    if (partition.size() != data.size()) {
        throw ValidationError("partition has " + std::to_string(partition.size()) + " labels for " +
                              std::to_string(data.size()) + " points");
    }
}

void check_cluster(const Partition& partition, int cluster_id) {
    if (cluster_id < 0 || cluster_id >= partition.k()) {
        throw ValidationError("cluster id " + std::to_string(cluster_id) + " outside 0.." +
                              std::to_string(partition.k() - 1));
    }
}

void check_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw ValidationError("lambda must lie in (0, 1], got " + std::to_string(lambda));
    }
}

// Contracts the listed points toward `center` in place.
void shrink_toward(std::vector<double>& coords, std::size_t dim, std::span<const std::size_t> ids,
                   std::span<const double> center, double lambda, const std::vector<bool>* mask) {
    if (lambda == 1.0) {
        return;
    }
    for (std::size_t i : ids) {
        for (std::size_t d = 0; d < dim; ++d) {
            if (mask != nullptr && !(*mask)[d]) {
                continue;
            }
            double& x = coords[i * dim + d];
            x = center[d] + lambda * (x - center[d]);
        }
    }
}


std::vector<double> pairwise_center_distances(const Partition& partition) {
    const auto k = static_cast<std::size_t>(partition.k());
    std::vector<double> d(k * k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            const double v =
                euclidean_distance(partition.centroid(static_cast<int>(a)), partition.centroid(static_cast<int>(b)));
            d[a * k + b] = v;
            d[b * k + a] = v;
        }
    }
    return d;
}

bool is_identity(const std::vector<double>& rotation, std::size_t dim) {
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if (rotation[r * dim + c] != (r == c ? 1.0 : 0.0)) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

TransformResult centric_transform(const Dataset& data, const Partition& partition, const CentricSpec& spec) {
    check_partition(data, partition);
    check_cluster(partition, spec.cluster_id);
    check_lambda(spec.lambda);
    if (spec.axis_mask && spec.axis_mask->size() != data.dim()) {
        throw ValidationError("axis mask has " + std::to_string(spec.axis_mask->size()) + " entries for dimension " +
                              std::to_string(data.dim()));
    }

    std::vector<std::size_t> ids;
    if (spec.subset) {
        ids = *spec.subset;
        if (ids.empty()) {
            throw ValidationError("centric subset is empty");
        }
        std::vector<std::size_t> sorted = ids;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw ValidationError("centric subset lists a point twice");
        }
        for (std::size_t i : ids) {
            if (i >= data.size() || partition.label(i) != spec.cluster_id) {
                throw ValidationError("subset point " + std::to_string(i) + " is not a member of cluster " +
                                      std::to_string(spec.cluster_id));
            }
        }
    } else {
        ids = partition.members(spec.cluster_id);
    }

    const Point center = centroid(data, ids);
    std::vector<double> coords = data.coords();
    shrink_toward(coords, data.dim(), ids, center, spec.lambda, spec.axis_mask ? &*spec.axis_mask : nullptr);

    nlohmann::json prov = {{"kind", spec.subset ? "subset-centric" : "centric"},
                           {"cluster", spec.cluster_id},
                           {"lambda", spec.lambda},
                           {"center", center}};
    if (spec.subset) {
        prov["subset"] = *spec.subset;
    }
    if (spec.axis_mask) {
        prov["axis_mask"] = *spec.axis_mask;
    }
    return TransformResult{data.with_coords(std::move(coords)), std::move(prov), partition};
}

EqualizedRadii equalize_radii(const Dataset& data, const Partition& partition) {
    check_partition(data, partition);
    if (partition.k() < 2) {
        throw ValidationError("radius equalization needs k >= 2");
    }
    const auto& radii = partition.radii();
    const double r_min = *std::min_element(radii.begin(), radii.end());
    const double r_max = *std::max_element(radii.begin(), radii.end());
    if (r_min <= 0.0 && r_max > 0.0) {
        throw RefusalError("cannot equalize radii: a cluster has radius 0 while others are positive");
    }

    std::vector<double> lambdas(radii.size(), 1.0);
    std::vector<double> coords = data.coords();
    for (int j = 0; j < partition.k(); ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (radii[uj] > r_min) {
            lambdas[uj] = r_min / radii[uj];
        }
        shrink_toward(coords, data.dim(), partition.members(j), partition.centroid(j), lambdas[uj], nullptr);
    }
    nlohmann::json prov = {{"kind", "equalize-radii"}, {"common_radius", r_min}, {"lambdas", lambdas}};
    return EqualizedRadii{TransformResult{data.with_coords(std::move(coords)), std::move(prov), partition}, r_min,
                          std::move(lambdas)};
}

RadialSeparation radial_separation(const Dataset& data, const Partition& partition, int reference_cluster,
                                   double stretch) {
    check_partition(data, partition);
    check_cluster(partition, reference_cluster);
    if (!(stretch >= 1.0) || !std::isfinite(stretch)) {
        throw ValidationError("stretch must be a finite value >= 1");
    }
    const std::size_t dim = data.dim();
    std::vector<double> coords = data.coords();
    if (stretch != 1.0) {
        auto ref = partition.centroid(reference_cluster);
        for (std::size_t i = 0; i < data.size(); ++i) {
            const int j = partition.label(i);
            if (j == reference_cluster) {
                continue;
            }
            auto mu = partition.centroid(j);
            for (std::size_t d = 0; d < dim; ++d) {
                coords[i * dim + d] += (stretch - 1.0) * (mu[d] - ref[d]);
            }
        }
    }
    Dataset moved = data.with_coords(std::move(coords));

    std::size_t decreased = 0;
    for (std::size_t a = 0; a < data.size(); ++a) {
        for (std::size_t b = a + 1; b < data.size(); ++b) {
            if (partition.label(a) == partition.label(b)) {
                continue;
            }
            const double before = std::sqrt(squared_distance(data.point(a), data.point(b)));
            const double after = std::sqrt(squared_distance(moved.point(a), moved.point(b)));
            if (after < before * (1.0 - kDistanceTolerance)) {
                ++decreased;
            }
        }
    }
    nlohmann::json prov = {{"kind", "radial-separation"},
                           {"reference_cluster", reference_cluster},
                           {"stretch", stretch},
                           {"decreased_pairs", decreased}};
    return RadialSeparation{TransformResult{std::move(moved), std::move(prov), partition}, decreased};
}

double max_enclosing_radius(const Partition& partition) {
    const auto& r = partition.radii();
    return *std::max_element(r.begin(), r.end());
}

double stretch_for_gap(const Partition& partition, double gap) {
    if (partition.k() < 2) {
        throw ValidationError("stretch needs k >= 2");
    }
    if (!(gap >= 0.0)) {
        throw ValidationError("gap must be non-negative");
    }
    double d_min = std::numeric_limits<double>::infinity();
    for (int a = 0; a < partition.k(); ++a) {
        for (int b = a + 1; b < partition.k(); ++b) {
            d_min = std::min(d_min, euclidean_distance(partition.centroid(a), partition.centroid(b)));
        }
    }
    if (d_min <= 0.0) {
        throw RefusalError("coincident centroids cannot be separated radially");
    }
    return 1.0 + gap / d_min;
}

double motion_safe_lambda(double equalized_radius, double min_center_distance) {
    if (!(equalized_radius >= 0.0) || !(min_center_distance > 0.0)) {
        throw ValidationError("motion-safe shrink needs R0 >= 0 and d_min > 0");
    }
    if (equalized_radius == 0.0) {
        return 1.0;
    }
    return std::min(1.0, min_center_distance / (6.0 * equalized_radius));
}

MotionBaseline make_motion_baseline(const Dataset& data, const Partition& partition, nlohmann::json provenance) {
    check_partition(data, partition);
    const Partition bound = partition.rebind(data);
    const double radius = max_enclosing_radius(bound);
    std::vector<double> distances = pairwise_center_distances(bound);
    double d_min = std::numeric_limits<double>::infinity();
    for (int a = 0; a < bound.k(); ++a) {
        for (int b = a + 1; b < bound.k(); ++b) {
            d_min = std::min(d_min, distances[static_cast<std::size_t>(a * bound.k() + b)]);
        }
    }
    return MotionBaseline{TransformResult{data, std::move(provenance), partition}, radius, 1.0, radius, d_min,
                          std::move(distances)};
}

MotionBaseline ensure_motion_safe(const Dataset& data, const Partition& partition) {
    check_partition(data, partition);
    if (partition.k() < 2) {
        throw ValidationError("motion-safe shrink needs k >= 2");
    }
    const auto k = static_cast<std::size_t>(partition.k());
    const std::vector<double> distances = pairwise_center_distances(partition);
    double d_min = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            if (distances[a * k + b] <= 0.0) {
                throw RefusalError("centroids of clusters " + std::to_string(a) + " and " + std::to_string(b) +
                                   " coincide");
            }
            d_min = std::min(d_min, distances[a * k + b]);
        }
    }

    EqualizedRadii eq = equalize_radii(data, partition);
    const double lambda = motion_safe_lambda(eq.common_radius, d_min);
    std::vector<double> coords = eq.result.dataset.coords();
    for (int j = 0; j < partition.k(); ++j) {
        shrink_toward(coords, data.dim(), partition.members(j), partition.centroid(j), lambda, nullptr);
    }
    const double safe = lambda * eq.common_radius;
    nlohmann::json prov = {{"kind", "motion-safe-shrink"},
                           {"rule", "lambda = min(1, d_min / (6 R0))"},
                           {"equalized_radius", eq.common_radius},
                           {"equalize_lambdas", eq.lambdas},
                           {"lambda", lambda},
                           {"safe_radius", safe},
                           {"min_center_distance", d_min}};
    Dataset shrunk = data.with_coords(std::move(coords));
    return MotionBaseline{TransformResult{std::move(shrunk), std::move(prov), partition},
                          eq.common_radius,
                          lambda,
                          safe,
                          d_min,
                          distances};
}

bool motion_safe(const Dataset& current, const MotionBaseline& baseline) {
    const Dataset& base = baseline.result.dataset;
    if (current.size() != base.size() || current.dim() != base.dim()) {
        throw ValidationError("current dataset does not carry the baseline's ids and dimension");
    }
    const Partition now = baseline.result.baseline_partition.rebind(current);
    const auto k = static_cast<std::size_t>(now.k());
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            const double d = euclidean_distance(now.centroid(static_cast<int>(a)), now.centroid(static_cast<int>(b)));
            if (d < baseline.center_distances[a * k + b] * (1.0 - kDistanceTolerance)) {
                return false;
            }
        }
    }
    for (int j = 0; j < now.k(); ++j) {
        const auto& m = now.members(j);
        for (std::size_t a = 0; a < m.size(); ++a) {
            for (std::size_t b = a + 1; b < m.size(); ++b) {
                const double d0 = std::sqrt(squared_distance(base.point(m[a]), base.point(m[b])));
                const double d1 = std::sqrt(squared_distance(current.point(m[a]), current.point(m[b])));
                if (std::abs(d1 - d0) > kDistanceTolerance * std::max({d0, d1, baseline.safe_radius})) {
                    return false;
                }
            }
        }
    }
    return true;
}

TransformResult apply_motion(const Dataset& data, const Partition& partition, const MotionSpec& spec) {
    check_partition(data, partition);
    const std::size_t dim = data.dim();
    if (spec.motions.size() != static_cast<std::size_t>(partition.k())) {
        throw ValidationError("motion spec has " + std::to_string(spec.motions.size()) + " entries for " +
                              std::to_string(partition.k()) + " clusters");
    }
    if (spec.reference_cluster) {
        check_cluster(partition, *spec.reference_cluster);
    }
    for (std::size_t j = 0; j < spec.motions.size(); ++j) {
        const auto& m = spec.motions[j];
        if (m.translation.size() != dim || m.rotation.size() != dim * dim) {
            throw ValidationError("motion of cluster " + std::to_string(j) + " has wrong dimensions");
        }
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                double dot = 0.0;
                for (std::size_t t = 0; t < dim; ++t) {
                    dot += m.rotation[r * dim + t] * m.rotation[c * dim + t];
                }
                if (std::abs(dot - (r == c ? 1.0 : 0.0)) > 1e-9) {
                    throw ValidationError("rotation of cluster " + std::to_string(j) + " is not orthogonal");
                }
            }
        }
    }

    std::vector<double> coords = data.coords();
    std::vector<double> rel(dim);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int j = partition.label(i);
        if (spec.reference_cluster && *spec.reference_cluster == j) {
            continue;
        }
        const auto& m = spec.motions[static_cast<std::size_t>(j)];
        double* x = coords.data() + i * dim;
        if (is_identity(m.rotation, dim)) {
            for (std::size_t d = 0; d < dim; ++d) {
                x[d] += m.translation[d];
            }
            continue;
        }
        auto mu = partition.centroid(j);
        for (std::size_t d = 0; d < dim; ++d) {
            rel[d] = x[d] - mu[d];
        }
        for (std::size_t r = 0; r < dim; ++r) {
            double v = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                v += m.rotation[r * dim + c] * rel[c];
            }
            x[r] = mu[r] + v + m.translation[r];
        }
    }

    nlohmann::json motions = nlohmann::json::array();
    for (const auto& m : spec.motions) {
        motions.push_back({{"translation", m.translation}, {"rotation", m.rotation}});
    }
    nlohmann::json prov = {{"kind", "motion"}, {"motions", motions}};
    if (spec.reference_cluster) {
        prov["reference_cluster"] = *spec.reference_cluster;
    }
    return TransformResult{data.with_coords(std::move(coords)), std::move(prov), partition};
}

std::vector<double> identity_rotation(std::size_t dim) {
    std::vector<double> r(dim * dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d) {
        r[d * dim + d] = 1.0;
    }
    return r;
}

MotionSpec random_motion_step(const Dataset& data, const Partition& partition, std::uint64_t seed, double step_max,
                              int reference_cluster) {
    check_partition(data, partition);
    check_cluster(partition, reference_cluster);
    if (!(step_max > 0.0) || !std::isfinite(step_max)) {
        throw ValidationError("step_max must be a positive finite value");
    }
    const std::size_t dim = data.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    MotionSpec spec;
    spec.reference_cluster = reference_cluster;
    for (int j = 0; j < partition.k(); ++j) {
        RigidMotion m{std::vector<double>(dim, 0.0), identity_rotation(dim)};
        if (j != reference_cluster) {
            double norm = 0.0;
            while (norm == 0.0) {
                norm = 0.0;
                for (auto& v : m.translation) {
                    v = gauss(rng);
                    norm += v * v;
                }
                norm = std::sqrt(norm);
            }
            const double length = step_max * (1.0 - unit(rng));
            for (auto& v : m.translation) {
                v *= length / norm;
            }
        }
        spec.motions.push_back(std::move(m));
    }
    return spec;
}

std::vector<double> random_rotation(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> q(dim * dim);
    // Modified Gram-Schmidt on the rows of a Gaussian matrix.
    for (std::size_t r = 0; r < dim; ++r) {
        double norm = 0.0;
        while (norm < 1e-6) {
            for (std::size_t c = 0; c < dim; ++c) {
                q[r * dim + c] = gauss(rng);
            }
            for (std::size_t p = 0; p < r; ++p) {
                double dot = 0.0;
                for (std::size_t c = 0; c < dim; ++c) {
                    dot += q[r * dim + c] * q[p * dim + c];
                }
                for (std::size_t c = 0; c < dim; ++c) {
                    q[r * dim + c] -= dot * q[p * dim + c];
                }
            }
            norm = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                norm += q[r * dim + c] * q[r * dim + c];
            }
            norm = std::sqrt(norm);
        }
        for (std::size_t c = 0; c < dim; ++c) {
            q[r * dim + c] /= norm;
        }
    }
    return q;
}

}  // namespace clustcons
