// Command-line front end: dataset generation and ingestion, pairwise
// distances, neighbor queries, the two benchmark sweeps and the metric audit.
//
// Exit codes: 0 success, 2 usage error, 3 data error.

#include "lcvs/bench.hpp"
#include "lcvs/error.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

namespace {

using namespace lcvs;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    // method
    std::vector<std::string> methods;
    unsigned sigma = 1;
    double segment_angle = ApproxMethod::default_segment_angle;
    double epsilon = 10.0;
    // synthesis / FoV
    std::size_t n_videos = 40;
    std::size_t frames = 25;
    double r = 30.0;
    double delta = 60.0;
    std::string mode = "straight";
    std::vector<std::string> modes{"straight", "random"};
    double extent = 200.0;
    double step = 4.0;
    double jitter = 5.0;
    std::uint64_t seed = 42;
    // io
    std::string in;
    std::vector<std::string> inputs;
    std::string matrix;
    std::string out;
    std::string format = "csv";
    // queries
    std::string a, b, query;
    std::size_t k = 5;
    unsigned threads = 1;
    std::vector<double> levels;
};

// Turns InvalidArgument raised while interpreting flags into a usage error.
template <class F>
auto from_flags(F&& f) {
    try {
        return f();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
}

MethodSpec method_spec(const Options& o, const std::string& fallback) {
    const std::string name = o.methods.empty() ? fallback : o.methods.front();
    if (o.methods.size() > 1) {
        throw UsageError("this command takes a single --method");
    }
    return from_flags([&] { return MethodSpec::parse(name, o.segment_angle, o.epsilon, o.sigma); });
}

SynthConfig synth_config(const Options& o, DirectionMode mode) {
    SynthConfig cfg;
    cfg.n_videos = o.n_videos;
    cfg.frames_per_video = o.frames;
    cfg.r = o.r;
    cfg.delta = o.delta;
    cfg.direction_mode = mode;
    cfg.extent = o.extent;
    cfg.step = o.step;
    cfg.heading_jitter = o.jitter;
    cfg.seed = o.seed;
    from_flags([&] {
        cfg.validate();
        return 0;
    });
    return cfg;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
    } else {
        write_file(o.out, text);
    }
}

Dataset load_input(const Options& o) {
    if (o.in.empty()) {
        throw UsageError("--in is required");
    }
    return load_trajectories(o.in);
}

void check_fov_flags(const Options& o) {
    from_flags([&] { return FoV({0, 0}, o.r, 0, o.delta); });
}

// ---------------------------------------------------------------------------

void cmd_synth(const Options& o) {
    const auto cfg = synth_config(o, from_flags([&] { return parse_direction_mode(o.mode); }));
    emit(o, dataset_to_json(Dataset{synthesize(cfg), std::nullopt}));
}

void cmd_ingest(const Options& o, bool bdd) {
    check_fov_flags(o);
    std::vector<std::vector<GeoSample>> per_file;
    std::vector<GeoSample> all;
    for (const auto& path : o.inputs) {
        per_file.push_back(bdd ? read_bdd100k_info(path) : read_gps_csv(path));
        all.insert(all.end(), per_file.back().begin(), per_file.back().end());
    }
    // One projection for the whole dataset so videos share coordinates.
    const ProjectionContext ctx = centroid(all);
    Dataset d;
    d.projection = ctx;
    for (std::size_t i = 0; i < o.inputs.size(); ++i) {
        d.videos.push_back(
            build_video(std::filesystem::path(o.inputs[i]).stem().string(), per_file[i], ctx, o.r, o.delta));
    }
    emit(o, dataset_to_json(d));
}

const GeoVideo& find_video(const Dataset& d, const std::string& id) {
    for (const auto& v : d.videos) {
        if (v.id() == id) {
            return v;
        }
    }
    throw UnknownId("unknown video id '" + id + "'");
}

void cmd_dist(const Options& o) {
    const auto spec = method_spec(o, "lcvs-mbs");
    const Dataset d = load_input(o);
    const double v = pair_distance(find_video(d, o.a), find_video(d, o.b), spec);
    emit(o, format_number(v) + "\n");
}

void cmd_matrix(const Options& o) {
    const auto spec = method_spec(o, "lcvs-mbs");
    const Dataset d = load_input(o);
    emit(o, matrix_to_csv(distance_matrix(d.videos, spec, o.threads)));
}

void cmd_knn(const Options& o) {
    DistanceMatrix m;
    if (!o.matrix.empty()) {
        m = matrix_from_csv(read_file(o.matrix));
    } else {
        const auto spec = method_spec(o, "lcvs-mbs");
        m = distance_matrix(load_input(o).videos, spec, o.threads);
    }
    std::string text;
    for (const auto& id : knn(m, o.query, o.k)) {
        text += id + "\n";
    }
    emit(o, text);
}

void cmd_bench(const Options& o, bool view_distance) {
    ExperimentOptions opts;
    opts.k = o.k;
    opts.sigma = o.sigma;
    opts.threads = o.threads;
    const std::vector<std::string> names =
        o.methods.empty() ? std::vector<std::string>{"lcss", "lcvs-mbs", "lcvs-mbt", "lcvs-mbr"} : o.methods;
    for (const auto& name : names) {
        opts.methods.push_back(
            from_flags([&] { return MethodSpec::parse(name, o.segment_angle, o.epsilon, o.sigma); }));
    }
    opts.modes.clear();
    for (const auto& m : o.modes) {
        opts.modes.push_back(from_flags([&] { return parse_direction_mode(m); }));
    }
    if (o.format != "csv" && o.format != "json") {
        throw UsageError("--format must be csv or json");
    }
    const SynthConfig base = synth_config(o, DirectionMode::straight);

    std::vector<double> levels = o.levels;
    if (levels.empty()) {
        levels = view_distance ? std::vector<double>{10, 20, 30, 40, 50, 60}
                               : std::vector<double>{250, 500, 750, 1000};
    }
    const ExperimentReport rep = from_flags([&] {
        return view_distance ? run_experiment_view_distance(base, levels, opts)
                             : run_experiment_fov_count(base, levels, opts);
    });
    emit(o, o.format == "csv" ? report_to_csv(rep) : report_to_json(rep));
}

void cmd_audit(const Options& o) {
    const auto spec = method_spec(o, "lcvs-oracle");
    if (!spec.approx()) {
        throw UsageError("audit-metric works on the lcvs-* methods");
    }
    std::vector<GeoVideo> videos;
    if (o.in.empty()) {
        videos = synthesize(synth_config(o, from_flags([&] { return parse_direction_mode(o.mode); })));
    } else {
        videos = load_input(o).videos;
    }
    const AuditReport rep = from_flags(
        [&] { return metric_audit(videos, LcvsParams{spec.sigma(), *spec.approx()}); });

    nlohmann::json j = {{"method", spec.name()},
                        {"sigma", spec.sigma()},
                        {"n_videos", rep.n_videos},
                        {"pairs_checked", rep.pairs_checked},
                        {"triples_checked", rep.triples_checked},
                        {"negative_count", rep.negative_count},
                        {"asymmetric_count", rep.asymmetric_count},
                        {"nonzero_self_count", rep.nonzero_self_count},
                        {"triangle_violation_count", rep.triangle_violation_count}};
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : rep.triangle_violations) {
        violations.push_back({{"a", v.a}, {"b", v.b}, {"c", v.c}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    }
    j["triangle_violations"] = std::move(violations);
    emit(o, j.dump(1) + "\n");
}

// ---------------------------------------------------------------------------

void add_method_flags(CLI::App* c, Options& o, bool many) {
    auto* m = c->add_option("--method", o.methods,
                            many ? "Methods, comma separated: lcvs-mbs, lcvs-mbt, lcvs-mbr, lcvs-oracle, lcss, hausdorff"
                                 : "lcvs-mbs, lcvs-mbt, lcvs-mbr, lcvs-oracle, lcss or hausdorff");
    if (many) {
        m->delimiter(',');
    }
    c->add_option("--sigma", o.sigma, "Largest index offset between matched frames")->capture_default_str();
    c->add_option("--segment-angle", o.segment_angle, "MBS segment angle in degrees")->capture_default_str();
    c->add_option("--epsilon", o.epsilon, "LCSS distance threshold in meters")->capture_default_str();
}

void add_synth_flags(CLI::App* c, Options& o, bool with_counts) {
    if (with_counts) {
        c->add_option("--n-videos", o.n_videos, "Number of videos")->capture_default_str();
    }
    c->add_option("--frames", o.frames, "Frames per video")->capture_default_str();
    c->add_option("--r", o.r, "Viewable distance in meters")->capture_default_str();
    c->add_option("--delta", o.delta, "Lens angle in degrees")->capture_default_str();
    c->add_option("--extent", o.extent, "Side of the start square in meters")->capture_default_str();
    c->add_option("--step", o.step, "Meters advanced per frame")->capture_default_str();
    c->add_option("--jitter", o.jitter, "Uniform heading change half-width in degrees")->capture_default_str();
    c->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
}

void add_out(CLI::App* c, Options& o) { c->add_option("--out", o.out, "Output file (default: stdout)"); }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Field-of-view trajectory similarity (LCVS) tools"};
    app.require_subcommand(1);
    Options o;
    std::function<void()> run;

    auto* synth = app.add_subcommand("synth", "Generate a synthetic trajectory dataset");
    add_synth_flags(synth, o, true);
    synth->add_option("--mode", o.mode, "straight or random camera direction")->capture_default_str();
    add_out(synth, o);
    synth->callback([&] { run = [&] { cmd_synth(o); }; });

    for (bool bdd : {false, true}) {
        auto* c = app.add_subcommand(bdd ? "ingest-bdd" : "ingest",
                                     bdd ? "Convert BDD100K info JSON files into a trajectory dataset"
                                         : "Convert GPS CSV logs (t,lat,lon[,course]) into a trajectory dataset");
        c->add_option("inputs", o.inputs, "Input files, one video each")->required();
        c->add_option("--r", o.r, "Viewable distance in meters")->capture_default_str();
        c->add_option("--delta", o.delta, "Lens angle in degrees")->capture_default_str();
        add_out(c, o);
        c->callback([&, bdd] { run = [&, bdd] { cmd_ingest(o, bdd); }; });
    }

    auto* dist = app.add_subcommand("dist", "Distance between two videos of a dataset");
    dist->add_option("--in", o.in, "Trajectory JSON")->required();
    dist->add_option("--a", o.a, "First video id")->required();
    dist->add_option("--b", o.b, "Second video id")->required();
    add_method_flags(dist, o, false);
    add_out(dist, o);
    dist->callback([&] { run = [&] { cmd_dist(o); }; });

    auto* matrix = app.add_subcommand("matrix", "Pairwise distance matrix as CSV");
    matrix->add_option("--in", o.in, "Trajectory JSON")->required();
    add_method_flags(matrix, o, false);
    matrix->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
    add_out(matrix, o);
    matrix->callback([&] { run = [&] { cmd_matrix(o); }; });

    auto* knn_cmd = app.add_subcommand("knn", "Nearest videos to a query");
    auto* knn_in = knn_cmd->add_option("--in", o.in, "Trajectory JSON");
    knn_cmd->add_option("--matrix", o.matrix, "Precomputed matrix CSV")->excludes(knn_in);
    knn_cmd->add_option("--query", o.query, "Query video id")->required();
    knn_cmd->add_option("--k", o.k, "Number of neighbors")->capture_default_str();
    knn_cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
    add_method_flags(knn_cmd, o, false);
    add_out(knn_cmd, o);
    knn_cmd->callback([&] {
        if (o.in.empty() && o.matrix.empty()) {
            throw CLI::ValidationError("knn needs --in or --matrix");
        }
        run = [&] { cmd_knn(o); };
    });

    for (bool view : {false, true}) {
        auto* c = app.add_subcommand(view ? "bench-viewdist" : "bench-fovs",
                                     view ? "Accuracy and runtime against viewable distance"
                                          : "Accuracy and runtime against the number of FoVs");
        add_synth_flags(c, o, view);
        add_method_flags(c, o, true);
        c->add_option("--levels", o.levels,
                      view ? "Viewable distances in meters (default 10,20,30,40,50,60)"
                           : "Total FoV counts (default 250,500,750,1000)")
            ->delimiter(',');
        c->add_option("--modes", o.modes, "Direction modes")->delimiter(',')->capture_default_str();
        c->add_option("--k", o.k, "Neighbors for precision@k")->capture_default_str();
        c->add_option("--threads", o.threads, "Workers for the untimed oracle matrix")->capture_default_str();
        c->add_option("--format", o.format, "csv or json")->capture_default_str();
        add_out(c, o);
        c->callback([&, view] { run = [&, view] { cmd_bench(o, view); }; });
    }

    auto* audit = app.add_subcommand("audit-metric", "Check the metric axioms of the LCVS distance");
    audit->add_option("--in", o.in, "Trajectory JSON (default: synthesize one)");
    add_synth_flags(audit, o, true);
    audit->add_option("--mode", o.mode, "straight or random (synthesized data)")->capture_default_str();
    add_method_flags(audit, o, false);
    add_out(audit, o);
    audit->callback([&] { run = [&] { cmd_audit(o); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        run();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const lcvs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
