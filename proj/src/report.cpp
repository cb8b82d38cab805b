#include "clustcons/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace clustcons {

using nlohmann::json;

namespace {

json config_json(const ExperimentConfig& c) {
    return {{"input", c.input},
            {"columns", c.columns},
            {"k", c.k},
            {"nstart", c.nstart},
            {"max_iters", c.max_iters},
            {"seed", c.seed},
            {"lambdas", c.lambdas},
            {"cumulative", c.cumulative},
            {"motion_steps", c.motion_steps},
            {"step_max", c.step_max},
            {"sample_in", c.sample_in},
            {"sample_out", c.sample_out},
            {"threads", c.threads}};
}

ExperimentConfig config_from(const json& j) {
    ExperimentConfig c;
    j.at("input").get_to(c.input);
    j.at("columns").get_to(c.columns);
    j.at("k").get_to(c.k);
    j.at("nstart").get_to(c.nstart);
    j.at("max_iters").get_to(c.max_iters);
    j.at("seed").get_to(c.seed);
    j.at("lambdas").get_to(c.lambdas);
    j.at("cumulative").get_to(c.cumulative);
    j.at("motion_steps").get_to(c.motion_steps);
    j.at("step_max").get_to(c.step_max);
    j.at("sample_in").get_to(c.sample_in);
    j.at("sample_out").get_to(c.sample_out);
    j.at("threads").get_to(c.threads);
    return c;
}

json direction_rows_json(const std::vector<DirectionRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"value", r.value},
                       {"bad_distances", r.bad_distances},
                       {"pairs", r.pairs},
                       {"bad_percentage", r.bad_percentage}});
    }
    return out;
}

std::vector<DirectionRow> direction_rows_from(const json& j) {
    std::vector<DirectionRow> rows;
    for (const auto& r : j) {
        rows.push_back({r.at("value").get<double>(), r.at("bad_distances").get<std::size_t>(),
                        r.at("pairs").get<std::size_t>(), r.at("bad_percentage").get<double>()});
    }
    return rows;
}

// Shortest form that reads back to the same double.
std::string num(double v) {
    return json(v).dump();
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Right-aligned columns, header underlined with dashes.
std::string align(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& r : rows) {
            width[c] = std::max(width[c], r[c].size());
        }
    }
    std::string out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out += (c ? "  " : "") + std::string(width[c] - cells[c].size(), ' ') + cells[c];
        }
        out += '\n';
    };
    emit(header);
    std::vector<std::string> rule;
    for (auto w : width) {
        rule.emplace_back(w, '-');
    }
    emit(rule);
    for (const auto& r : rows) {
        emit(r);
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

template <typename Report>
void write_any(const Report& report, const std::string& path, ReportFormat format) {
    write_text(path, format == ReportFormat::Json ? to_json(report).dump(2) + "\n" : render_table(report));
}

}  // namespace

ReportFormat parse_report_format(const std::string& text) {
    if (text == "json") {
        return ReportFormat::Json;
    }
    if (text == "table") {
        return ReportFormat::Table;
    }
    throw ValidationError("unknown report format '" + text + "' (expected json or table)");
}

json to_json(const CentricExperimentReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"lambda", row.lambda},
                        {"disagreements", row.disagreements},
                        {"violation_percentage", row.violation_percentage},
                        {"recluster_cost", row.recluster_cost},
                        {"recluster_seed", row.recluster_seed}});
    }
    return {{"kind", "centric"},
            {"config", config_json(r.config)},
            {"n", r.n},
            {"dim", r.dim},
            {"golden_cost", r.golden_cost},
            {"central_cluster", r.central_cluster},
            {"rows", rows},
            {"wall_time_seconds", r.wall_time_seconds},
            {"provenance", r.provenance}};
}

json to_json(const MotionExperimentReport& r) {
    json steps = json::array();
    for (const auto& s : r.steps) {
        steps.push_back({{"step", s.step},
                         {"accepted", s.accepted},
                         {"motion_clu", s.motion_clu},
                         {"motion_dst", s.motion_dst},
                         {"step_clu", s.step_clu},
                         {"step_dst", s.step_dst}});
    }
    return {{"kind", "motion"},
            {"config", config_json(r.config)},
            {"n", r.n},
            {"dim", r.dim},
            {"golden_cost", r.golden_cost},
            {"central_cluster", r.central_cluster},
            {"equalized_radius", r.equalized_radius},
            {"shrink", r.shrink},
            {"safe_radius", r.safe_radius},
            {"step_max", r.step_max},
            {"center_dst", r.center_dst},
            {"center_clu", r.center_clu},
            {"motion_dst", r.motion_dst},
            {"motion_clu", r.motion_clu},
            {"step_dst", r.step_dst},
            {"step_clu", r.step_clu},
            {"accepted_steps", r.accepted_steps},
            {"rejected_steps", r.rejected_steps},
            {"steps", steps},
            {"wall_time_seconds", r.wall_time_seconds},
            {"provenance", r.provenance}};
}

json to_json(const DirectionExperimentReport& r) {
    const auto& c = r.config;
    return {{"kind", "direction"},
            {"config",
             {{"dim", c.dim},
              {"seed", c.seed},
              {"points_per_cluster", c.points_per_cluster},
              {"radius", c.radius},
              {"center_distance_radii", c.center_distance_radii},
              {"move_fraction", c.move_fraction},
              {"angles_deg", c.angles_deg},
              {"shifts", c.shifts}}},
            {"rotation_rows", direction_rows_json(r.rotation_rows)},
            {"shift_rows", direction_rows_json(r.shift_rows)},
            {"wall_time_seconds", r.wall_time_seconds}};
}

CentricExperimentReport centric_report_from_json(const json& j) {
    CentricExperimentReport r;
    r.config = config_from(j.at("config"));
    j.at("n").get_to(r.n);
    j.at("dim").get_to(r.dim);
    j.at("golden_cost").get_to(r.golden_cost);
    j.at("central_cluster").get_to(r.central_cluster);
    for (const auto& row : j.at("rows")) {
        r.rows.push_back({row.at("lambda").get<double>(), row.at("disagreements").get<std::size_t>(),
                          row.at("violation_percentage").get<double>(), row.at("recluster_cost").get<double>(),
                          row.at("recluster_seed").get<std::uint64_t>()});
    }
    j.at("wall_time_seconds").get_to(r.wall_time_seconds);
    r.provenance = j.at("provenance");
    return r;
}

MotionExperimentReport motion_report_from_json(const json& j) {
    MotionExperimentReport r;
    r.config = config_from(j.at("config"));
    j.at("n").get_to(r.n);
    j.at("dim").get_to(r.dim);
    j.at("golden_cost").get_to(r.golden_cost);
    j.at("central_cluster").get_to(r.central_cluster);
    j.at("equalized_radius").get_to(r.equalized_radius);
    j.at("shrink").get_to(r.shrink);
    j.at("safe_radius").get_to(r.safe_radius);
    j.at("step_max").get_to(r.step_max);
    j.at("center_dst").get_to(r.center_dst);
    j.at("center_clu").get_to(r.center_clu);
    j.at("motion_dst").get_to(r.motion_dst);
    j.at("motion_clu").get_to(r.motion_clu);
    j.at("step_dst").get_to(r.step_dst);
    j.at("step_clu").get_to(r.step_clu);
    j.at("accepted_steps").get_to(r.accepted_steps);
    j.at("rejected_steps").get_to(r.rejected_steps);
    for (const auto& s : j.at("steps")) {
        r.steps.push_back({s.at("step").get<int>(), s.at("accepted").get<bool>(),
                           s.at("motion_clu").get<std::size_t>(), s.at("motion_dst").get<double>(),
                           s.at("step_clu").get<std::size_t>(), s.at("step_dst").get<double>()});
    }
    j.at("wall_time_seconds").get_to(r.wall_time_seconds);
    r.provenance = j.at("provenance");
    return r;
}

DirectionExperimentReport direction_report_from_json(const json& j) {
    DirectionExperimentReport r;
    const auto& c = j.at("config");
    c.at("dim").get_to(r.config.dim);
    c.at("seed").get_to(r.config.seed);
    c.at("points_per_cluster").get_to(r.config.points_per_cluster);
    c.at("radius").get_to(r.config.radius);
    c.at("center_distance_radii").get_to(r.config.center_distance_radii);
    c.at("move_fraction").get_to(r.config.move_fraction);
    c.at("angles_deg").get_to(r.config.angles_deg);
    c.at("shifts").get_to(r.config.shifts);
    r.rotation_rows = direction_rows_from(j.at("rotation_rows"));
    r.shift_rows = direction_rows_from(j.at("shift_rows"));
    j.at("wall_time_seconds").get_to(r.wall_time_seconds);
    return r;
}

std::string render_table(const CentricExperimentReport& r) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : r.rows) {
        rows.push_back({num(row.lambda), std::to_string(row.disagreements), fixed(row.violation_percentage, 4),
                        num(row.recluster_cost)});
    }
    std::string out = "centric experiment: n=" + std::to_string(r.n) + " dim=" + std::to_string(r.dim) +
                      " k=" + std::to_string(r.config.k) + " nstart=" + std::to_string(r.config.nstart) +
                      " seed=" + std::to_string(r.config.seed) + "\n";
    out += "golden cost " + num(r.golden_cost) + ", central cluster " + std::to_string(r.central_cluster) + "\n\n";
    out += align({"lambda", "disagreements", "violation.pct", "recluster.cost"}, rows);
    out += "\ntime.sec " + fixed(r.wall_time_seconds, 3) + "\n";
    return out;
}

std::string render_table(const MotionExperimentReport& r) {
    std::string out = "motion experiment: n=" + std::to_string(r.n) + " dim=" + std::to_string(r.dim) +
                      " k=" + std::to_string(r.config.k) + " nstart=" + std::to_string(r.config.nstart) +
                      " seed=" + std::to_string(r.config.seed) + "\n";
    out += "equalized radius " + num(r.equalized_radius) + ", shrink " + num(r.shrink) + ", safe radius " +
           num(r.safe_radius) + ", step max " + num(r.step_max) + "\n";
    out += "accepted steps " + std::to_string(r.accepted_steps) + ", rejected steps " +
           std::to_string(r.rejected_steps) + "\n\n";
    out += align({"center.dst", "center.clu", "motion.dst", "motion.clu", "step.dst", "step.clu", "time.sec"},
                 {{fixed(r.center_dst, 4), std::to_string(r.center_clu), fixed(r.motion_dst, 4),
                   std::to_string(r.motion_clu), fixed(r.step_dst, 4), std::to_string(r.step_clu),
                   fixed(r.wall_time_seconds, 3)}});
    std::vector<std::vector<std::string>> steps;
    for (const auto& s : r.steps) {
        if (s.accepted) {
            steps.push_back({std::to_string(s.step), "yes", fixed(s.motion_dst, 4), std::to_string(s.motion_clu),
                             fixed(s.step_dst, 4), std::to_string(s.step_clu)});
        } else {
            steps.push_back({std::to_string(s.step), "no", "-", "-", "-", "-"});
        }
    }
    out += "\n" + align({"step", "accepted", "motion.dst", "motion.clu", "step.dst", "step.clu"}, steps);
    return out;
}

std::string render_table(const DirectionExperimentReport& r) {
    auto rows_of = [](const std::vector<DirectionRow>& rows) {
        std::vector<std::vector<std::string>> out;
        for (const auto& row : rows) {
            out.push_back({num(row.value), std::to_string(row.bad_distances), std::to_string(row.pairs),
                           fixed(row.bad_percentage, 2)});
        }
        return out;
    };
    std::string out = "direction experiment: seed=" + std::to_string(r.config.seed) +
                      " points/cluster=" + std::to_string(r.config.points_per_cluster) + "\n\n";
    out += "two clusters, rotated motion direction\n";
    out += align({"angle.deg", "bad.distances", "pairs", "bad.pct"}, rows_of(r.rotation_rows));
    out += "\nfive clusters, top cluster shifted away from the central one\n";
    out += align({"shift", "bad.distances", "pairs", "bad.pct"}, rows_of(r.shift_rows));
    return out;
}

void write_report(const CentricExperimentReport& report, const std::string& path, ReportFormat format) {
    write_any(report, path, format);
}

void write_report(const MotionExperimentReport& report, const std::string& path, ReportFormat format) {
    write_any(report, path, format);
}

void write_report(const DirectionExperimentReport& report, const std::string& path, ReportFormat format) {
    write_any(report, path, format);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestionError("cannot read '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IngestionError("'" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace clustcons
