#include "cli_app.hpp"

#include "clustcons/consistency.hpp"
#include "clustcons/experiments.hpp"
#include "clustcons/kmeans.hpp"
#include "clustcons/single_link.hpp"
#include "clustcons/synthetic.hpp"
#include "clustcons/transforms.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <ostream>

namespace clustcons::cli {

using nlohmann::json;

namespace {

struct Shared {
    std::string input;
    std::string columns;
    std::string labels;
    std::string output;
    std::string format = "json";
};

struct KmeansFlags {
    int k = 2;
    int nstart = 10;
    int max_iters = 100;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

struct Options {
    Shared shared;
    KmeansFlags km;

    std::string algo = "kmeans";
    int l = 2;
    double threshold = 1.0 / 9.0;
    int kmax = 8;

    std::string kind;
    double lambda = 1.0;
    int cluster = -1;
    std::string subset;
    std::string axes;
    double stretch = 0.0;

    std::string after;
    std::size_t samples = 1000;

    std::string lambdas = "0.8,0.6,0.4,0.2";
    bool cumulative = false;
    int motion_steps = 20;
    double step_max = 0.0;
    std::size_t sample_in = 100;
    std::size_t sample_out = 100;
    std::size_t points = 100;

    std::size_t dim = 2;
    std::size_t clusters = 3;
    std::size_t per_cluster = 100;
    std::size_t n = 100;
    double sigma = 5.0;
    double offset = 0.5;
    double noise = 0.05;
    std::string labels_out;
};

void add_shared(CLI::App* cmd, Shared& s, bool needs_input) {
    auto* in = cmd->add_option("--input", s.input, "Dataset file (whitespace or comma delimited)");
    if (needs_input) {
        in->required();
    }
    cmd->add_option("--columns", s.columns, "Columns to read, e.g. 0,2,5 or 0..31 (default: all)");
    cmd->add_option("--labels", s.labels, "Partition file, one integer label per line");
    cmd->add_option("--output", s.output, "Output file (default: standard output)");
    cmd->add_option("--format", s.format, "Output format")->check(CLI::IsMember({"json", "table"}));
}

void add_kmeans(CLI::App* cmd, KmeansFlags& km, int default_nstart) {
    km.nstart = default_nstart;
    cmd->add_option("--k", km.k, "Number of k-means clusters");
    cmd->add_option("--nstart", km.nstart, "Random restarts");
    cmd->add_option("--max-iters", km.max_iters, "Lloyd iterations per restart");
    cmd->add_option("--seed", km.seed, "Random seed");
    cmd->add_option("--threads", km.threads, "Worker threads (0 = hardware concurrency)");
}

KmeansConfig kmeans_config(const KmeansFlags& f) {
    KmeansConfig c;
    c.k = f.k;
    c.nstart = f.nstart;
    c.max_iters = f.max_iters;
    c.seed = f.seed;
    c.threads = f.threads;
    return c;
}

json kmeans_json(const KmeansFlags& f) {
    return {{"k", f.k}, {"nstart", f.nstart}, {"max_iters", f.max_iters}, {"seed", f.seed}, {"threads", f.threads}};
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size() && !text.empty()) {
        const auto comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
            throw ValidationError("invalid number '" + item + "' in '" + text + "'");
        }
        out.push_back(v);
        pos = comma + 1;
    }
    return out;
}

Dataset load_input(const Shared& s) {
    return load_dataset(s.input, s.columns.empty() ? std::vector<std::size_t>{} : parse_columns(s.columns));
}

// The --labels partition when given, otherwise a k-means clustering of `data`.
Partition partition_for(const Dataset& data, const Shared& s, const KmeansFlags& km) {
    if (!s.labels.empty()) {
        return Partition::from_labels(data, read_labels(s.labels));
    }
    return lloyd_kmeans(data, kmeans_config(km)).partition;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f || !(f << text)) {
        throw IoError("cannot write '" + path + "'");
    }
}

std::string render(const json& j, const std::string& format) {
    if (format == "json") {
        return j.dump(2) + "\n";
    }
    std::string text;
    for (const auto& [key, value] : j.items()) {
        if (value.is_array() && value.size() > 16) {
            text += key + ": [" + std::to_string(value.size()) + " values]\n";
        } else {
            text += key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
        }
    }
    return text;
}

std::vector<bool> axis_mask(const std::string& axes, std::size_t dim) {
    std::vector<bool> mask(dim, false);
    for (std::size_t a : parse_columns(axes)) {
        if (a >= dim) {
            throw ValidationError("axis " + std::to_string(a) + " outside 0.." + std::to_string(dim - 1));
        }
        mask[a] = true;
    }
    return mask;
}

int cmd_cluster(const Options& o, std::ostream& out, std::ostream& err) {
    err << "config: "
        << json{{"command", "cluster"},
                {"algo", o.algo},
                {"input", o.shared.input},
                {"columns", o.shared.columns},
                {"kmeans", kmeans_json(o.km)},
                {"l", o.l},
                {"threshold", o.threshold},
                {"kmax", o.kmax}}
               .dump()
        << "\n";
    const Dataset data = load_input(o.shared);
    json summary{{"algo", o.algo}, {"n", data.size()}, {"dim", data.dim()}};
    std::vector<int> labels;
    if (o.algo == "kmeans") {
        const auto r = lloyd_kmeans(data, kmeans_config(o.km));
        labels = r.partition.labels();
        summary["k"] = r.partition.k();
        summary["cost"] = r.cost;
        summary["best_restart"] = r.best_restart_index;
    } else if (o.algo == "bisect") {
        BisectConfig b;
        b.kmax = o.kmax;
        b.rel_decrease_threshold = o.threshold;
        const auto r = bisectional_auto_kmeans(data, b, kmeans_config(o.km));
        labels = r.partition.labels();
        summary["k"] = r.partition.k();
        summary["cost"] = kmeans_cost(data, r.partition);
    } else if (o.algo == "kmlmst") {
        const auto r = kmeans_l_mst(data, o.km.k, o.l, kmeans_config(o.km));
        labels = r.partition.labels();
        summary["k"] = r.kmeans.partition.k();
        summary["l"] = r.partition.k();
        summary["kmeans_cost"] = r.kmeans.cost;
    } else {
        const auto r = single_link_k(data, o.km.k);
        labels = r.partition.labels();
        summary["k"] = r.partition.k();
    }
    summary["sizes"] = Partition::from_labels(data, labels).sizes();
    if (!o.shared.output.empty()) {
        write_labels(o.shared.output, labels);
    } else {
        summary["labels"] = labels;
    }
    out << render(summary, o.shared.format);
    return kExitOk;
}

int cmd_transform(const Options& o, std::ostream& out, std::ostream& err) {
    err << "config: "
        << json{{"command", "transform"},
                {"kind", o.kind},
                {"input", o.shared.input},
                {"columns", o.shared.columns},
                {"labels", o.shared.labels},
                {"kmeans", kmeans_json(o.km)},
                {"lambda", o.lambda},
                {"cluster", o.cluster},
                {"subset", o.subset},
                {"axes", o.axes},
                {"stretch", o.stretch}}
               .dump()
        << "\n";
    const Dataset data = load_input(o.shared);
    const Partition p = partition_for(data, o.shared, o.km);
    const int cluster = o.cluster >= 0 ? o.cluster : select_central_cluster(p);
    TransformResult result{data, {}, p};
    if (o.kind == "centric") {
        CentricSpec spec;
        spec.cluster_id = cluster;
        spec.lambda = o.lambda;
        if (!o.subset.empty()) {
            spec.subset = parse_columns(o.subset);
        }
        if (!o.axes.empty()) {
            spec.axis_mask = axis_mask(o.axes, data.dim());
        }
        result = centric_transform(data, p, spec);
    } else if (o.kind == "equalize") {
        result = equalize_radii(data, p).result;
    } else if (o.kind == "separate") {
        const double stretch = o.stretch > 0.0 ? o.stretch : stretch_for_gap(p, 4.0 * max_enclosing_radius(p));
        const auto sep = radial_separation(data, p, cluster, stretch);
        result = sep.result;
        result.provenance["decreased_pairs"] = sep.decreased_pairs;
    } else {
        result = ensure_motion_safe(data, p).result;
    }
    if (o.shared.output.empty()) {
        write_dataset(out, result.dataset);
    } else {
        write_dataset(o.shared.output, result.dataset);
        out << render(result.provenance, o.shared.format);
    }
    return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
    err << "config: "
        << json{{"command", "check"},
                {"kind", o.kind},
                {"input", o.shared.input},
                {"after", o.after},
                {"columns", o.shared.columns},
                {"labels", o.shared.labels},
                {"kmeans", kmeans_json(o.km)},
                {"cluster", o.cluster},
                {"samples", o.samples}}
               .dump()
        << "\n";
    const Dataset before = load_input(o.shared);
    Shared after_src = o.shared;
    after_src.input = o.after;
    const Dataset after = load_input(after_src);
    if (after.size() != before.size() || after.dim() != before.dim()) {
        throw ValidationError("before and after datasets differ in shape");
    }
    json result{{"kind", o.kind}};
    if (o.kind == "convergent") {
        result["convergent"] = convergent_check(before, after);
    } else {
        const Partition p = partition_for(before, o.shared, o.km);
        if (o.kind == "gamma") {
            const auto r = classify_gamma(before, after, p);
            result["classification"] = to_string(r.classification);
            result["intra_increased"] = r.intra_increased;
            result["inter_decreased"] = r.inter_decreased;
            result["intra_pairs"] = r.intra_pairs;
            result["inter_pairs"] = r.inter_pairs;
            result["intra_changed"] = r.intra_changed;
            result["inter_changed"] = r.inter_changed;
            result["violation_percentage"] = r.violation_percentage;
        } else if (o.kind == "gravitational") {
            const int cluster = o.cluster >= 0 ? o.cluster : select_central_cluster(p);
            const auto r = gravitational_check(before, after, p, cluster, o.samples, o.km.seed);
            result["cluster"] = cluster;
            result["consistent"] = r.consistent;
            result["worst_violation"] = r.worst_violation;
            result["pairs_checked"] = r.pairs_checked;
            result["exhaustive"] = r.exhaustive;
        } else {
            result["motion_safe"] = motion_safe(after, make_motion_baseline(before, p));
        }
    }
    emit(render(result, o.shared.format), o.shared.output, out);
    return kExitOk;
}

ExperimentConfig experiment_config(const Options& o) {
    ExperimentConfig c;
    c.input = o.shared.input;
    c.columns = o.shared.columns.empty() ? std::vector<std::size_t>{} : parse_columns(o.shared.columns);
    c.k = o.km.k;
    c.nstart = o.km.nstart;
    c.max_iters = o.km.max_iters;
    c.seed = o.km.seed;
    c.threads = o.km.threads;
    c.lambdas = parse_doubles(o.lambdas);
    c.cumulative = o.cumulative;
    c.motion_steps = o.motion_steps;
    c.step_max = o.step_max;
    c.sample_in = o.sample_in;
    c.sample_out = o.sample_out;
    return c;
}

template <typename Report>
void emit_report(const Report& report, const Shared& s, std::ostream& out) {
    const auto format = parse_report_format(s.format);
    if (s.output.empty()) {
        out << (format == ReportFormat::Json ? to_json(report).dump(2) + "\n" : render_table(report));
    } else {
        write_report(report, s.output, format);
    }
}

int cmd_experiment(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.kind == "direction") {
        DirectionConfig d;
        d.seed = o.km.seed;
        d.points_per_cluster = o.points;
        err << "config: " << to_json(DirectionExperimentReport{d, {}, {}, 0.0}).at("config").dump() << "\n";
        emit_report(run_direction_experiment(d), o.shared, out);
        return kExitOk;
    }
    if (o.shared.input.empty()) {
        throw ValidationError("--input is required for the " + o.kind + " experiment");
    }
    const ExperimentConfig c = experiment_config(o);
    if (o.kind == "centric") {
        err << "config: " << to_json(CentricExperimentReport{c, 0, 0, 0.0, 0, {}, 0.0, {}}).at("config").dump()
            << "\n";
        emit_report(run_centric_experiment(c), o.shared, out);
    } else {
        err << "config: " << to_json(MotionExperimentReport{.config = c}).at("config").dump() << "\n";
        emit_report(run_motion_experiment(c), o.shared, out);
    }
    return kExitOk;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream& err) {
    err << "config: "
        << json{{"command", "generate"},
                {"kind", o.kind},
                {"seed", o.km.seed},
                {"dim", o.dim},
                {"clusters", o.clusters},
                {"per_cluster", o.per_cluster},
                {"n", o.n},
                {"sigma", o.sigma},
                {"offset", o.offset},
                {"noise", o.noise}}
               .dump()
        << "\n";
    LabeledDataset g{Dataset(1, {0.0, 0.0}), {}};
    if (o.kind == "dim") {
        g = dim_set(o.dim, o.clusters, o.per_cluster, o.km.seed, o.sigma);
    } else if (o.kind == "moons") {
        g = two_moons(o.per_cluster, o.offset, o.noise, o.km.seed);
    } else {
        g = {uniform_cube(o.n, o.dim, o.km.seed), {}};
    }
    if (o.shared.output.empty()) {
        write_dataset(out, g.data);
    } else {
        write_dataset(o.shared.output, g.data);
    }
    if (!o.labels_out.empty()) {
        if (g.labels.empty()) {
            throw ValidationError("the cube generator has no labels to write");
        }
        write_labels(o.labels_out, g.labels);
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cluster-preserving transformations, consistency checks and experiments", "clustcons-cli"};
    app.require_subcommand(1);
    Options o;

    auto* cluster = app.add_subcommand("cluster", "Cluster a dataset and write one label per line");
    add_shared(cluster, o.shared, true);
    add_kmeans(cluster, o.km, 10);
    cluster->add_option("--algo", o.algo, "Algorithm")
        ->check(CLI::IsMember({"kmeans", "bisect", "kmlmst", "singlelink"}));
    cluster->add_option("--l", o.l, "Final cluster count for kmlmst");
    cluster->add_option("--threshold", o.threshold, "Relative cost decrease needed to split (bisect)");
    cluster->add_option("--kmax", o.kmax, "Largest cluster count for bisect");

    auto* transform = app.add_subcommand("transform", "Apply a cluster-preserving transformation");
    add_shared(transform, o.shared, true);
    add_kmeans(transform, o.km, 10);
    transform->add_option("--kind", o.kind, "Transformation")
        ->required()
        ->check(CLI::IsMember({"centric", "equalize", "separate", "motion-safe-shrink"}));
    transform->add_option("--lambda", o.lambda, "Contraction factor in (0, 1]");
    transform->add_option("--cluster", o.cluster, "Target or reference cluster (default: the central one)");
    transform->add_option("--subset", o.subset, "Point ids to contract, e.g. 3,5..9");
    transform->add_option("--axes", o.axes, "Axes the contraction acts on, e.g. 0,2");
    transform->add_option("--stretch", o.stretch, "Radial stretch factor (default: adds 4R to every gap)");

    auto* check = app.add_subcommand("check", "Check a before/after pair of datasets");
    add_shared(check, o.shared, true);
    add_kmeans(check, o.km, 10);
    check->add_option("--kind", o.kind, "Check")
        ->required()
        ->check(CLI::IsMember({"gamma", "gravitational", "convergent", "motion-safe"}));
    check->add_option("--after", o.after, "Transformed dataset")->required();
    check->add_option("--cluster", o.cluster, "Cluster for the gravitational check (default: the central one)");
    check->add_option("--samples", o.samples, "Sampled subset pairs for large clusters");

    auto* experiment = app.add_subcommand("experiment", "Run an experiment and write its report");
    add_shared(experiment, o.shared, false);
    add_kmeans(experiment, o.km, 100);
    experiment->add_option("--kind", o.kind, "Experiment")
        ->required()
        ->check(CLI::IsMember({"centric", "motion", "direction"}));
    experiment->add_option("--lambdas", o.lambdas, "Comma separated contraction factors");
    experiment->add_flag("--cumulative", o.cumulative, "Apply each lambda to the previous result");
    experiment->add_option("--motion-steps", o.motion_steps, "Random motion steps");
    experiment->add_option("--step-max", o.step_max, "Longest motion step (default: half the safe radius)");
    experiment->add_option("--sample-in", o.sample_in, "Sampled points inside the central cluster");
    experiment->add_option("--sample-out", o.sample_out, "Sampled points outside the central cluster");
    experiment->add_option("--points", o.points, "Points per cluster in the direction experiment");

    auto* generate = app.add_subcommand("generate", "Write a synthetic dataset");
    generate->add_option("--kind", o.kind, "Generator")->required()->check(CLI::IsMember({"dim", "moons", "cube"}));
    generate->add_option("--output", o.shared.output, "Dataset file (default: standard output)");
    generate->add_option("--labels-out", o.labels_out, "Ground-truth label file");
    generate->add_option("--seed", o.km.seed, "Random seed");
    generate->add_option("--dim", o.dim, "Dimension");
    generate->add_option("--clusters", o.clusters, "Cluster count");
    generate->add_option("--per-cluster", o.per_cluster, "Points per cluster (per moon for moons)");
    generate->add_option("--n", o.n, "Point count for the cube");
    generate->add_option("--sigma", o.sigma, "Cluster spread");
    generate->add_option("--offset", o.offset, "Vertical offset of the second moon");
    generate->add_option("--noise", o.noise, "Moon noise");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto parsed = app.get_subcommands();
        err << (parsed.empty() ? app.help() : parsed.front()->help());
        return kExitInvalid;
    }

    try {
        if (cluster->parsed()) {
            return cmd_cluster(o, out, err);
        }
        if (transform->parsed()) {
            return cmd_transform(o, out, err);
        }
        if (check->parsed()) {
            return cmd_check(o, out, err);
        }
        if (experiment->parsed()) {
            return cmd_experiment(o, out, err);
        }
        return cmd_generate(o, out, err);
    } catch (const RefusalError& e) {
        err << "refused: " << e.what() << "\n";
        return kExitRefused;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}

}  // namespace clustcons::cli
