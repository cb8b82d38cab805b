#include "clustcons/experiments.hpp"

#include "clustcons/consistency.hpp"
#include "clustcons/kmeans.hpp"
#include "clustcons/synthetic.hpp"
#include "clustcons/transforms.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace clustcons {

namespace {

constexpr std::size_t kRejectExamples = 5;

// Seed streams derived from the experiment seed.
constexpr std::uint64_t kCentricReclusterStream = 1000;
constexpr std::uint64_t kCentricSampleStream = 2000;
constexpr std::uint64_t kBaselineReclusterStream = 3000;
constexpr std::uint64_t kBaselineSampleStream = 3001;
constexpr std::uint64_t kMotionStepStream = 4000;
constexpr std::uint64_t kMotionReclusterStream = 5000;
constexpr std::uint64_t kMotionSampleStream = 6000;
constexpr std::uint64_t kStepSampleStream = 7000;

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ',' || std::isspace(static_cast<unsigned char>(line[i])))) {
            if (line[i] == ',') {
                // Consecutive commas leave an empty field.
                std::size_t j = i + 1;
                while (j < line.size() && line[j] != ',' && std::isspace(static_cast<unsigned char>(line[j]))) {
                    ++j;
                }
                if (j < line.size() && line[j] == ',') {
                    fields.emplace_back();
                }
            }
            ++i;
        }
        if (i >= line.size()) {
            break;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ',' && !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

bool parse_number(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    if (text.empty()) {
        return false;
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string join(const std::vector<std::size_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? ", " : "") + std::to_string(values[i]);
    }
    return out;
}

void validate(const ExperimentConfig& config) {
    if (config.k < 2) {
        throw ValidationError("experiments need k >= 2");
    }
    if (config.nstart < 1 || config.max_iters < 1) {
        throw ValidationError("nstart and max_iters must be at least 1");
    }
    for (double l : config.lambdas) {
        if (!(l > 0.0 && l <= 1.0)) {
            throw ValidationError("lambdas must lie in (0, 1]");
        }
    }
    if (config.motion_steps < 1) {
        throw ValidationError("motion_steps must be at least 1");
    }
    if (config.sample_in < 1 || config.sample_out < 1) {
        throw ValidationError("sample sizes must be at least 1");
    }
    if (!std::isfinite(config.step_max)) {
        throw ValidationError("step_max must be finite");
    }
}

KmeansConfig kmeans_config(const ExperimentConfig& config, std::uint64_t seed) {
    KmeansConfig k;
    k.k = config.k;
    k.nstart = config.nstart;
    k.max_iters = config.max_iters;
    k.seed = seed;
    k.threads = config.threads;
    return k;
}

SamplePlan sample_plan(const ExperimentConfig& config, int cluster, std::uint64_t seed) {
    return SamplePlan{cluster, config.sample_in, config.sample_out, seed};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Inter-cluster pairs whose distance decreased when `moved` is displaced by `shift`.
DirectionRow count_decreased(const std::vector<Point>& moved, const std::vector<std::vector<Point>>& others,
                             const Point& shift, double value) {
    DirectionRow row;
    row.value = value;
    for (const auto& cluster : others) {
        for (const auto& a : moved) {
            const Point a2{a[0] + shift[0], a[1] + shift[1]};
            for (const auto& b : cluster) {
                const double before = euclidean_distance(a, b);
                const double after = euclidean_distance(a2, b);
                if (after < before * (1.0 - kDistanceTolerance)) {
                    ++row.bad_distances;
                }
                ++row.pairs;
            }
        }
    }
    row.bad_percentage = row.pairs ? 100.0 * static_cast<double>(row.bad_distances) / static_cast<double>(row.pairs)
                                   : 0.0;
    return row;
}

}  // namespace

LoadReport load_dataset_report(const std::string& path, const std::vector<std::size_t>& columns) {
    std::ifstream in(path);
    if (!in) {
        throw IngestionError("cannot read dataset file '" + path + "'");
    }
    std::vector<std::size_t> cols = columns;
    std::vector<double> coords;
    std::vector<bool> column_ever_numeric;
    LoadReport report{Dataset(1, {0.0, 0.0}), {}, false, 0, {}};
    bool first = true;
    std::size_t line_no = 0;
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (blank(line)) {
            continue;
        }
        const auto fields = split_fields(line);
        if (first && cols.empty()) {
            for (std::size_t c = 0; c < fields.size(); ++c) {
                cols.push_back(c);
            }
        }
        if (column_ever_numeric.empty()) {
            column_ever_numeric.assign(cols.size(), false);
        }
        std::vector<double> row(cols.size());
        bool ok = true;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (cols[c] >= fields.size() || !parse_number(fields[cols[c]], row[c])) {
                ok = false;
            } else {
                column_ever_numeric[c] = true;
            }
        }
        if (first) {
            first = false;
            if (!ok) {
                report.header_skipped = true;
                std::fill(column_ever_numeric.begin(), column_ever_numeric.end(), false);
                continue;
            }
        }
        if (!ok) {
            ++report.rejected_rows;
            if (report.rejected_examples.size() < kRejectExamples) {
                report.rejected_examples.push_back(line_no);
            }
            continue;
        }
        coords.insert(coords.end(), row.begin(), row.end());
        ++rows;
    }
    if (cols.empty() || column_ever_numeric.size() != cols.size()) {
        throw IngestionError("dataset file '" + path + "' contains no data rows");
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (!column_ever_numeric[c]) {
            throw IngestionError("column " + std::to_string(cols[c]) + " of '" + path +
                                 "' has no numeric value in any row");
        }
    }
    if (rows < 2) {
        std::string msg = "dataset file '" + path + "' has " + std::to_string(rows) + " usable rows (need 2)";
        if (report.rejected_rows > 0) {
            msg += "; " + std::to_string(report.rejected_rows) + " rows rejected, first at lines " +
                   join(report.rejected_examples);
        }
        throw IngestionError(msg);
    }
    report.data = Dataset(cols.size(), std::move(coords));
    report.columns = std::move(cols);
    return report;
}

Dataset load_dataset(const std::string& path, const std::vector<std::size_t>& columns) {
    return load_dataset_report(path, columns).data;
}

std::vector<std::size_t> parse_columns(const std::string& text) {
    std::vector<std::size_t> out;
    auto parse_index = [&](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
            s.remove_prefix(1);
        }
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
            s.remove_suffix(1);
        }
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
            throw ValidationError("invalid column index '" + std::string(s) + "' in '" + text + "'");
        }
        return v;
    };
    std::string_view rest(text);
    while (true) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        const auto dots = item.find("..");
        if (dots == std::string_view::npos) {
            out.push_back(parse_index(item));
        } else {
            const std::size_t lo = parse_index(item.substr(0, dots));
            const std::size_t hi = parse_index(item.substr(dots + 2));
            if (hi < lo) {
                throw ValidationError("descending column range in '" + text + "'");
            }
            for (std::size_t c = lo; c <= hi; ++c) {
                out.push_back(c);
            }
        }
        if (comma == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(comma + 1);
    }
    return out;
}

void write_dataset(std::ostream& out, const Dataset& data) {
    char buf[64];
    std::string line;
    for (std::size_t i = 0; i < data.size(); ++i) {
        line.clear();
        for (double v : data.point(i)) {
            if (!line.empty()) {
                line += ' ';
            }
            const auto res = std::to_chars(buf, buf + sizeof buf, v);
            line.append(buf, res.ptr);
        }
        out << line << '\n';
    }
}

void write_dataset(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    write_dataset(out, data);
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

std::vector<int> read_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestionError("cannot read label file '" + path + "'");
    }
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            continue;
        }
        std::istringstream ss(line);
        int v = 0;
        std::string extra;
        if (!(ss >> v) || (ss >> extra) || v < 0) {
            throw IngestionError("label file '" + path + "' line " + std::to_string(line_no) +
                                 ": expected a non-negative integer");
        }
        labels.push_back(v);
    }
    return labels;
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    for (int l : labels) {
        out << l << '\n';
    }
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

CentricExperimentReport run_centric_experiment(const ExperimentConfig& config) {
    return run_centric_experiment(load_dataset(config.input, config.columns), config);
}

CentricExperimentReport run_centric_experiment(const Dataset& data, const ExperimentConfig& config) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    CentricExperimentReport report;
    report.config = config;
    report.n = data.size();
    report.dim = data.dim();

    const ClusteringResult golden = lloyd_kmeans(data, kmeans_config(config, config.seed));
    report.golden_cost = golden.cost;
    report.central_cluster = select_central_cluster(golden.partition);

    Dataset current = data;
    for (std::size_t i = 0; i < config.lambdas.size(); ++i) {
        const double lambda = config.lambdas[i];
        const Dataset& source = config.cumulative ? current : data;
        CentricSpec spec;
        spec.cluster_id = report.central_cluster;
        spec.lambda = lambda;
        const Dataset moved = centric_transform(source, golden.partition.rebind(source), spec).dataset;

        CentricRow row;
        row.lambda = lambda;
        row.recluster_seed = mix_seed(config.seed, kCentricReclusterStream + i);
        const ClusteringResult again = lloyd_kmeans(moved, kmeans_config(config, row.recluster_seed));
        row.recluster_cost = again.cost;
        row.disagreements = disagreement_count(golden.partition.labels(), again.partition.labels());
        row.violation_percentage = sampled_violation_percentage(
            data, moved, golden.partition,
            sample_plan(config, report.central_cluster, mix_seed(config.seed, kCentricSampleStream + i)));
        report.rows.push_back(row);
        current = moved;
    }

    report.provenance = {
        {"golden", "lloyd_kmeans with random-set restarts, seed = config.seed"},
        {"central_cluster", "minimum sum of squared distances to the other centroids"},
        {"lambda_application", config.cumulative ? "cumulative" : "independent, from the original data"},
        {"recluster_seed", "mix_seed(seed, 1000 + lambda index)"},
        {"sample_seed", "mix_seed(seed, 2000 + lambda index)"},
        {"violation", "sampled cross pairs, central cluster x rest, distance decreased beyond relative 1e-9"}};
    report.wall_time_seconds = seconds_since(start);
    return report;
}

MotionExperimentReport run_motion_experiment(const ExperimentConfig& config) {
    return run_motion_experiment(load_dataset(config.input, config.columns), config);
}

MotionExperimentReport run_motion_experiment(const Dataset& data, const ExperimentConfig& config) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    MotionExperimentReport report;
    report.config = config;
    report.n = data.size();
    report.dim = data.dim();

    const ClusteringResult golden = lloyd_kmeans(data, kmeans_config(config, config.seed));
    const Partition& gold = golden.partition;
    report.golden_cost = golden.cost;
    const int c = select_central_cluster(gold);
    report.central_cluster = c;

    const MotionBaseline baseline = ensure_motion_safe(data, gold);
    const Dataset& base = baseline.result.dataset;
    report.equalized_radius = baseline.equalized_radius;
    report.shrink = baseline.shrink;
    report.safe_radius = baseline.safe_radius;

    const ClusteringResult base_clu =
        lloyd_kmeans(base, kmeans_config(config, mix_seed(config.seed, kBaselineReclusterStream)));
    report.center_clu = disagreement_count(gold.labels(), base_clu.partition.labels());
    report.center_dst = sampled_violation_percentage(
        data, base, gold, sample_plan(config, c, mix_seed(config.seed, kBaselineSampleStream)));

    double step_max = config.step_max;
    if (step_max <= 0.0) {
        step_max = 0.5 * baseline.safe_radius;
    }
    if (step_max <= 0.0) {
        step_max = 0.05 * baseline.min_center_distance;
    }
    report.step_max = step_max;

    Dataset current = base;
    std::vector<int> previous_labels = base_clu.partition.labels();
    for (int s = 0; s < config.motion_steps; ++s) {
        const auto us = static_cast<std::uint64_t>(s);
        const Partition bound = gold.rebind(current);
        const MotionSpec spec = random_motion_step(current, bound, mix_seed(config.seed, kMotionStepStream + us),
                                                   step_max, c);
        Dataset candidate = apply_motion(current, bound, spec).dataset;

        MotionStepRow row;
        row.step = s;
        row.accepted = motion_safe(candidate, baseline);
        if (!row.accepted) {
            ++report.rejected_steps;
            report.steps.push_back(row);
            continue;
        }
        ++report.accepted_steps;
        const ClusteringResult again =
            lloyd_kmeans(candidate, kmeans_config(config, mix_seed(config.seed, kMotionReclusterStream + us)));
        row.motion_clu = disagreement_count(base_clu.partition.labels(), again.partition.labels());
        row.step_clu = disagreement_count(previous_labels, again.partition.labels());
        row.motion_dst = sampled_violation_percentage(
            base, candidate, gold, sample_plan(config, c, mix_seed(config.seed, kMotionSampleStream + us)));
        row.step_dst = sampled_violation_percentage(
            current, candidate, gold, sample_plan(config, c, mix_seed(config.seed, kStepSampleStream + us)));

        report.motion_clu = std::max(report.motion_clu, row.motion_clu);
        report.step_clu = std::max(report.step_clu, row.step_clu);
        report.motion_dst = std::max(report.motion_dst, row.motion_dst);
        report.step_dst = std::max(report.step_dst, row.step_dst);
        report.steps.push_back(row);

        current = std::move(candidate);
        previous_labels = again.partition.labels();
    }

    report.provenance = {
        {"golden", "lloyd_kmeans with random-set restarts, seed = config.seed"},
        {"baseline", baseline.result.provenance},
        {"shrink_rule", "equalize radii to the smallest, then lambda = min(1, d_min / (6 R0)) for every cluster"},
        {"step", "random unit direction, length uniform in (0, step_max], central cluster fixed"},
        {"gate", "step rolled back unless centroid distances stay >= baseline and clusters stay rigid"},
        {"center", "baseline vs original data and golden clustering"},
        {"motion", "maximum over accepted steps, vs baseline data and baseline reclustering"},
        {"step_relative", "maximum over accepted steps, vs previous accepted configuration"}};
    report.wall_time_seconds = seconds_since(start);
    return report;
}

DirectionExperimentReport run_direction_experiment(const DirectionConfig& config) {
    if (config.dim != 2) {
        throw ValidationError("the direction experiment is defined in 2 dimensions");
    }
    if (config.points_per_cluster < 1 || !(config.radius > 0.0) || !(config.center_distance_radii > 0.0)) {
        throw ValidationError("direction experiment needs points, a positive radius and a positive spacing");
    }
    const auto start = std::chrono::steady_clock::now();
    DirectionExperimentReport report;
    report.config = config;
    const double r = config.radius;
    const double dist = config.center_distance_radii * r;
    const std::size_t m = config.points_per_cluster;
    auto disk = [&](double x, double y, std::uint64_t stream) {
        return uniform_disk({x, y}, r, m, mix_seed(config.seed, stream));
    };

    // Experiment 1: cluster B to the right of A moves by a fixed length.
    const auto a = disk(0.0, 0.0, 0);
    const auto b = disk(dist, 0.0, 1);
    const double step = config.move_fraction * dist;
    for (double angle : config.angles_deg) {
        const double t = angle * std::numbers::pi / 180.0;
        report.rotation_rows.push_back(count_decreased(b, {a}, {step * std::cos(t), step * std::sin(t)}, angle));
    }

    // Experiment 2: central cluster with neighbours above, below, and diagonally
    // up-left and up-right; the top cluster moves straight up.
    const auto central = disk(0.0, 0.0, 10);
    const auto top = disk(0.0, dist, 11);
    const auto left = disk(-dist, dist, 12);
    const auto right = disk(dist, dist, 13);
    const auto bottom = disk(0.0, -dist, 14);
    for (double s : config.shifts) {
        report.shift_rows.push_back(count_decreased(top, {central, left, right, bottom}, {0.0, s * dist}, s));
    }
    report.wall_time_seconds = seconds_since(start);
    return report;
}

}  // namespace clustcons
