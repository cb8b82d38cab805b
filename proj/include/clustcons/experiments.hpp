#ifndef CLUSTCONS_EXPERIMENTS_HPP
#define CLUSTCONS_EXPERIMENTS_HPP

#include "clustcons/core.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

/**
 * @file experiments.hpp
 *
 * @brief Dataset ingestion and the end-to-end experiments that derive new
 * labeled datasets from a golden-standard k-means clustering.
 */

namespace clustcons {

struct LoadReport {
    Dataset data;
    std::vector<std::size_t> columns;
    bool header_skipped = false;
    std::size_t rejected_rows = 0;
    /// 1-based line numbers of the first rejected rows.
    std::vector<std::size_t> rejected_examples;
};

/**
 * @brief Reads whitespace- or comma-delimited numeric rows.
 *
 * An empty column list selects every field of the first data row. The first
 * non-empty line is skipped as a header iff one of its selected fields fails
 * to parse as a number; later rows with a missing or non-numeric selected
 * field are rejected and counted. Throws IngestionError for unreadable files,
 * files without usable rows, or a selected column that is never numeric.
 */
LoadReport load_dataset_report(const std::string& path, const std::vector<std::size_t>& columns);
Dataset load_dataset(const std::string& path, const std::vector<std::size_t>& columns);

/// Parses `"0,2,5"`, `"0..31"` and mixtures such as `"0..3,7"`.
std::vector<std::size_t> parse_columns(const std::string& text);

/// One point per line, coordinates in shortest round-trip form separated by spaces.
void write_dataset(const std::string& path, const Dataset& data);
void write_dataset(std::ostream& out, const Dataset& data);

/// One integer label per line, aligned with the dataset rows.
std::vector<int> read_labels(const std::string& path);
void write_labels(const std::string& path, const std::vector<int>& labels);

struct ExperimentConfig {
    std::string input;
    std::vector<std::size_t> columns;
    int k = 2;
    int nstart = 100;
    int max_iters = 100;
    std::uint64_t seed = 0;
    std::vector<double> lambdas{0.8, 0.6, 0.4, 0.2};
    /// Apply each lambda to the previous result instead of the original data.
    bool cumulative = false;
    int motion_steps = 20;
    /// Longest random motion step; non-positive selects half the motion-safe radius.
    double step_max = 0.0;
    std::size_t sample_in = 100;
    std::size_t sample_out = 100;
    unsigned threads = 0;

    bool operator==(const ExperimentConfig&) const = default;
};

struct CentricRow {
    double lambda = 1.0;
    std::size_t disagreements = 0;
    double violation_percentage = 0.0;
    double recluster_cost = 0.0;
    std::uint64_t recluster_seed = 0;

    bool operator==(const CentricRow&) const = default;
};

struct CentricExperimentReport {
    ExperimentConfig config;
    std::size_t n = 0;
    std::size_t dim = 0;
    double golden_cost = 0.0;
    int central_cluster = 0;
    std::vector<CentricRow> rows;
    double wall_time_seconds = 0.0;
    nlohmann::json provenance;

    bool operator==(const CentricExperimentReport&) const = default;
};

struct MotionStepRow {
    int step = 0;
    bool accepted = false;
    std::size_t motion_clu = 0;
    double motion_dst = 0.0;
    std::size_t step_clu = 0;
    double step_dst = 0.0;

    bool operator==(const MotionStepRow&) const = default;
};

/**
 * `center_*` compare the motion-safe shrunk data with the original data and
 * golden clustering; `motion_*` are maxima over accepted steps relative to the
 * shrunk baseline; `step_*` are maxima relative to the previous accepted
 * configuration.
 */
struct MotionExperimentReport {
    ExperimentConfig config;
    std::size_t n = 0;
    std::size_t dim = 0;
    double golden_cost = 0.0;
    int central_cluster = 0;
    double equalized_radius = 0.0;
    double shrink = 1.0;
    double safe_radius = 0.0;
    double step_max = 0.0;
    double center_dst = 0.0;
    std::size_t center_clu = 0;
    double motion_dst = 0.0;
    std::size_t motion_clu = 0;
    double step_dst = 0.0;
    std::size_t step_clu = 0;
    int accepted_steps = 0;
    int rejected_steps = 0;
    std::vector<MotionStepRow> steps;
    double wall_time_seconds = 0.0;
    nlohmann::json provenance;

    bool operator==(const MotionExperimentReport&) const = default;
};

struct DirectionConfig {
    std::size_t dim = 2;
    std::uint64_t seed = 0;
    std::size_t points_per_cluster = 100;
    double radius = 1.0;
    /// Center spacing in units of the cluster radius.
    double center_distance_radii = 6.0;
    /// Two-cluster experiment: step length as a fraction of the center distance.
    double move_fraction = 0.1;
    std::vector<double> angles_deg{-90, -60, -30, 0, 30, 60, 90};
    std::vector<double> shifts{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

    bool operator==(const DirectionConfig&) const = default;
};

struct DirectionRow {
    double value = 0.0;
    std::size_t bad_distances = 0;
    std::size_t pairs = 0;
    double bad_percentage = 0.0;

    bool operator==(const DirectionRow&) const = default;
};

struct DirectionExperimentReport {
    DirectionConfig config;
    /// Two clusters; one moves in a direction rotated from the center line.
    std::vector<DirectionRow> rotation_rows;
    /// Five clusters; the top one moves straight away from the central one.
    std::vector<DirectionRow> shift_rows;
    double wall_time_seconds = 0.0;

    bool operator==(const DirectionExperimentReport&) const = default;
};

CentricExperimentReport run_centric_experiment(const ExperimentConfig& config);
CentricExperimentReport run_centric_experiment(const Dataset& data, const ExperimentConfig& config);

MotionExperimentReport run_motion_experiment(const ExperimentConfig& config);
MotionExperimentReport run_motion_experiment(const Dataset& data, const ExperimentConfig& config);

DirectionExperimentReport run_direction_experiment(const DirectionConfig& config);

enum class ReportFormat { Json, Table };

ReportFormat parse_report_format(const std::string& text);

nlohmann::json to_json(const CentricExperimentReport& report);
nlohmann::json to_json(const MotionExperimentReport& report);
nlohmann::json to_json(const DirectionExperimentReport& report);

CentricExperimentReport centric_report_from_json(const nlohmann::json& j);
MotionExperimentReport motion_report_from_json(const nlohmann::json& j);
DirectionExperimentReport direction_report_from_json(const nlohmann::json& j);

std::string render_table(const CentricExperimentReport& report);
std::string render_table(const MotionExperimentReport& report);
std::string render_table(const DirectionExperimentReport& report);

/// Throws IoError when `path` cannot be written.
void write_report(const CentricExperimentReport& report, const std::string& path, ReportFormat format);
void write_report(const MotionExperimentReport& report, const std::string& path, ReportFormat format);
void write_report(const DirectionExperimentReport& report, const std::string& path, ReportFormat format);

nlohmann::json read_json_file(const std::string& path);

}  // namespace clustcons

#endif
