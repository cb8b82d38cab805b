#include "clustcons/experiments.hpp"
#include "clustcons/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace clustcons;

namespace {

std::string tmp_path(const std::string& name) {
    const std::filesystem::path dir(CLUSTCONS_TEST_TMPDIR);
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

std::string write_text(const std::string& name, const std::string& text) {
    const std::string path = tmp_path(name);
    std::ofstream(path) << text;
    return path;
}

Dataset five_blobs(std::uint64_t seed) {
    return gaussian_blobs({{0.0, 0.0}, {20.0, 0.0}, {0.0, 20.0}, {-20.0, 0.0}, {0.0, -20.0}}, 30, 1.5, seed).data;
}

// Regular octagons of radius 1 around well spaced centers: equal radii, d_min >= 6 R.
Dataset octagons() {
    std::vector<Point> rows;
    for (const Point& c : std::vector<Point>{{0.0, 0.0}, {30.0, 0.0}, {0.0, 30.0}, {-30.0, 0.0}}) {
        for (int i = 0; i < 8; ++i) {
            const double t = i * std::numbers::pi / 4.0;
            rows.push_back({c[0] + std::cos(t), c[1] + std::sin(t)});
        }
    }
    return Dataset::from_rows(rows);
}

ExperimentConfig small_config(int k) {
    ExperimentConfig c;
    c.k = k;
    c.nstart = 20;
    c.seed = 7;
    c.sample_in = 20;
    c.sample_out = 40;
    return c;
}

}  // namespace

TEST_CASE("whitespace and comma files") {
    const auto ws = write_text("ws.txt", "1 2 3\n4 5 6\n\n  7\t8 9  \n");
    const Dataset d = load_dataset(ws, {});
    CHECK(d.size() == 3);
    CHECK(d.dim() == 3);
    CHECK(d.point(2)[0] == 7.0);
    CHECK(d.point(2)[2] == 9.0);

    const auto csv = write_text("five.csv", "a,b,c,d,e\n1,2,3,4,5\n6,7,8,9,10\n+1.5,x,-2e3,0,0\n");
    const auto rep = load_dataset_report(csv, {0, 2});
    CHECK(rep.header_skipped);
    CHECK(rep.columns == std::vector<std::size_t>{0, 2});
    CHECK(rep.rejected_rows == 0);
    // Hand parse of columns 0 and 2.
    CHECK(rep.data.coords() == std::vector<double>{1.0, 3.0, 6.0, 8.0, 1.5, -2000.0});

    const auto mixed = write_text("mixed.txt", "1 2\nbad row\n3 4\n5\n6 7\n");
    const auto mrep = load_dataset_report(mixed, {});
    CHECK_FALSE(mrep.header_skipped);
    CHECK(mrep.rejected_rows == 2);
    CHECK(mrep.rejected_examples == std::vector<std::size_t>{2, 4});
    CHECK(mrep.data.size() == 3);

    const auto empty_field = write_text("gap.csv", "1,,3\n4,5,6\n7,8,9\n");
    const auto grep = load_dataset_report(empty_field, {0, 1});
    CHECK(grep.header_skipped);
    CHECK(grep.data.size() == 2);
}

TEST_CASE("ingestion errors") {
    CHECK_THROWS_AS(load_dataset(tmp_path("does-not-exist.txt"), {}), IngestionError);
    CHECK_THROWS_AS(load_dataset(write_text("blank.txt", "\n\n"), {}), IngestionError);
    CHECK_THROWS_AS(load_dataset(write_text("one.txt", "1 2\n"), {}), IngestionError);
    CHECK_THROWS_AS(load_dataset(write_text("words.txt", "x 1\ny 2\nz 3\n"), {0, 1}), IngestionError);
    CHECK_THROWS_AS(load_dataset(write_text("short.txt", "1 2\n3 4\n"), {5}), IngestionError);
    CHECK_THROWS_AS(read_labels(write_text("labels.txt", "0\n-1\n")), IngestionError);
    CHECK_THROWS_AS(read_labels(tmp_path("no-labels.txt")), IngestionError);
}

TEST_CASE("column lists") {
    CHECK(parse_columns("0..3,7") == std::vector<std::size_t>{0, 1, 2, 3, 7});
    CHECK(parse_columns("2") == std::vector<std::size_t>{2});
    CHECK(parse_columns(" 1 , 4 ") == std::vector<std::size_t>{1, 4});
    CHECK_THROWS_AS(parse_columns("3..1"), ValidationError);
    CHECK_THROWS_AS(parse_columns("a"), ValidationError);
    CHECK_THROWS_AS(parse_columns("1,,2"), ValidationError);
    CHECK_THROWS_AS(parse_columns("-1"), ValidationError);
}

TEST_CASE("dataset and label files round trip") {
    const Dataset d = Dataset::from_rows({{0.1, -2.5e-7}, {1e300, 3.0}});
    const auto path = tmp_path("round.txt");
    write_dataset(path, d);
    CHECK(load_dataset(path, {}) == d);

    const std::vector<int> labels{0, 2, 1, 1};
    const auto lpath = tmp_path("round.labels");
    write_labels(lpath, labels);
    CHECK(read_labels(lpath) == labels);

    CHECK_THROWS_AS(write_dataset("/nonexistent-dir/x.txt", d), IoError);
}

TEST_CASE("centric experiment") {
    const Dataset x = five_blobs(3);
    ExperimentConfig cfg = small_config(5);
    const auto r = run_centric_experiment(x, cfg);
    CHECK(r.n == 150);
    CHECK(r.dim == 2);
    REQUIRE(r.rows.size() == 4);
    for (const auto& row : r.rows) {
        CHECK(row.disagreements == 0);
        CHECK(row.violation_percentage >= 0.0);
        CHECK(row.violation_percentage <= 100.0);
        CHECK(row.recluster_cost <= r.golden_cost + 1e-9);
    }

    cfg.lambdas = {1.0};
    const auto same = run_centric_experiment(x, cfg);
    CHECK(same.rows[0].disagreements == 0);
    CHECK(same.rows[0].violation_percentage == 0.0);

    cfg.lambdas = {};
    CHECK(run_centric_experiment(x, cfg).rows.empty());
    CHECK(to_json(run_centric_experiment(x, cfg))["rows"].empty());

    cfg.lambdas = {0.5, 0.5};
    cfg.cumulative = true;
    const auto cum = run_centric_experiment(x, cfg);
    REQUIRE(cum.rows.size() == 2);
    CHECK(cum.rows[1].recluster_cost < cum.rows[0].recluster_cost);

    cfg.lambdas = {1.5};
    CHECK_THROWS_AS(run_centric_experiment(x, cfg), ValidationError);
    cfg.lambdas = {0.5};
    cfg.k = 1;
    CHECK_THROWS_AS(run_centric_experiment(x, cfg), ValidationError);
}

TEST_CASE("centric experiment is deterministic and serializes") {
    const Dataset x = five_blobs(4);
    const ExperimentConfig cfg = small_config(5);
    auto a = run_centric_experiment(x, cfg);
    auto b = run_centric_experiment(x, cfg);
    a.wall_time_seconds = b.wall_time_seconds = 0.0;
    CHECK(a == b);

    const auto back = centric_report_from_json(to_json(a));
    CHECK(back == a);
    const auto j = nlohmann::json::parse(to_json(a).dump());
    CHECK(centric_report_from_json(j) == a);

    const std::string table = render_table(a);
    for (const char* h : {"lambda", "disagreements", "violation.pct", "recluster.cost"}) {
        CHECK(table.find(h) != std::string::npos);
    }
    const auto path = tmp_path("centric.json");
    write_report(a, path, ReportFormat::Json);
    CHECK(centric_report_from_json(read_json_file(path)) == a);
    CHECK_THROWS_AS(write_report(a, "/nonexistent-dir/r.json", ReportFormat::Json), IoError);

    CHECK(parse_report_format("json") == ReportFormat::Json);
    CHECK(parse_report_format("table") == ReportFormat::Table);
    CHECK_THROWS_AS(parse_report_format("xml"), ValidationError);
}

TEST_CASE("motion experiment") {
    const Dataset x = five_blobs(5);
    ExperimentConfig cfg = small_config(5);
    cfg.motion_steps = 10;
    const auto r = run_motion_experiment(x, cfg);
    CHECK(r.accepted_steps + r.rejected_steps == 10);
    CHECK(r.steps.size() == 10);
    CHECK(r.center_clu == 0);
    CHECK(r.motion_clu == 0);
    CHECK(r.step_clu == 0);
    CHECK(r.shrink > 0.0);
    CHECK(r.shrink <= 1.0);
    CHECK(r.safe_radius == doctest::Approx(r.shrink * r.equalized_radius));
    CHECK(r.step_max == doctest::Approx(0.5 * r.safe_radius));
    for (const auto& s : r.steps) {
        if (!s.accepted) {
            CHECK(s.motion_clu == 0);
            CHECK(s.motion_dst == 0.0);
        }
        CHECK(s.motion_dst <= r.motion_dst);
    }

    auto again = run_motion_experiment(x, cfg);
    auto first = r;
    again.wall_time_seconds = first.wall_time_seconds = 0.0;
    CHECK(again == first);
    CHECK(motion_report_from_json(to_json(first)) == first);

    const std::string table = render_table(first);
    for (const char* h : {"center.dst", "center.clu", "motion.dst", "motion.clu", "step.dst", "step.clu"}) {
        CHECK(table.find(h) != std::string::npos);
    }
    CHECK_THROWS_AS(write_report(first, "/nonexistent-dir/m.txt", ReportFormat::Table), IoError);
}

TEST_CASE("motion experiment identity limit") {
    const Dataset x = octagons();
    ExperimentConfig cfg = small_config(4);
    cfg.step_max = 1e-9;
    cfg.motion_steps = 5;
    const auto r = run_motion_experiment(x, cfg);
    CHECK(r.shrink == 1.0);
    CHECK(r.center_clu == 0);
    CHECK(r.center_dst == 0.0);
    CHECK(r.accepted_steps == 5);
    CHECK(r.motion_clu == 0);
    CHECK(r.motion_dst == 0.0);
    CHECK(r.step_clu == 0);
    CHECK(r.step_dst == 0.0);

    cfg.step_max = std::nan("");
    CHECK_THROWS_AS(run_motion_experiment(x, cfg), ValidationError);
}

TEST_CASE("direction experiment") {
    DirectionConfig cfg;
    cfg.seed = 3;
    const auto r = run_direction_experiment(cfg);
    REQUIRE(r.rotation_rows.size() == 7);
    REQUIRE(r.shift_rows.size() == 11);
    for (const auto& row : r.rotation_rows) {
        CHECK(row.pairs == 100 * 100);
        if (row.value == 0.0) {
            CHECK(row.bad_distances == 0);
        }
        if (std::abs(row.value) == 90.0) {
            CHECK(row.bad_distances > 0);
        }
    }
    CHECK(r.shift_rows[0].bad_distances == 0);
    for (const auto& row : r.shift_rows) {
        CHECK(row.pairs == 4 * 100 * 100);
        CHECK(row.bad_percentage == doctest::Approx(100.0 * static_cast<double>(row.bad_distances) / 40000.0));
    }

    auto again = run_direction_experiment(cfg);
    auto first = r;
    again.wall_time_seconds = first.wall_time_seconds = 0.0;
    CHECK(again == first);
    CHECK(direction_report_from_json(to_json(first)) == first);
    CHECK(render_table(first).find("bad.pct") != std::string::npos);

    cfg.dim = 3;
    CHECK_THROWS_AS(run_direction_experiment(cfg), ValidationError);
}
