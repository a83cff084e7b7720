#include "lcvs/bench.hpp"

#include "lcvs/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace lcvs {

using nlohmann::json;

// ---------------------------------------------------------------------------
// MethodSpec

MethodSpec MethodSpec::lcvs(ApproxMethod approx, unsigned sigma) {
    Kind kind = Kind::lcvs_mbs;
    std::string name = "lcvs-mbs";
    switch (approx.kind()) {
    case ApproxMethod::Kind::mbs:
        break;
    case ApproxMethod::Kind::mbt:
        kind = Kind::lcvs_mbt;
        name = "lcvs-mbt";
        break;
    case ApproxMethod::Kind::mbr:
        kind = Kind::lcvs_mbr;
        name = "lcvs-mbr";
        break;
    case ApproxMethod::Kind::oracle:
        kind = Kind::lcvs_oracle;
        name = "lcvs-oracle";
        break;
    }
    MethodSpec s(kind, std::move(name));
    s.m_approx = approx;
    s.m_sigma = sigma;
    return s;
}

MethodSpec MethodSpec::lcss(double epsilon, unsigned sigma) {
    if (!(epsilon > 0)) {
        throw InvalidArgument("LCSS epsilon must be positive");
    }
    MethodSpec s(Kind::lcss, "lcss");
    s.m_epsilon = epsilon;
    s.m_sigma = sigma;
    return s;
}

MethodSpec MethodSpec::hausdorff() { return MethodSpec(Kind::hausdorff, "hausdorff"); }

MethodSpec MethodSpec::parse(const std::string& name, double segment_angle, double epsilon,
                             unsigned sigma) {
    if (name == "lcvs-mbs") {
        return lcvs(ApproxMethod::mbs(segment_angle), sigma);
    }
    if (name == "lcvs-mbt") {
        return lcvs(ApproxMethod::mbt(), sigma);
    }
    if (name == "lcvs-mbr") {
        return lcvs(ApproxMethod::mbr(), sigma);
    }
    if (name == "lcvs-oracle") {
        return lcvs(ApproxMethod::oracle(), sigma);
    }
    if (name == "lcss") {
        return lcss(epsilon, sigma);
    }
    if (name == "hausdorff") {
        return hausdorff();
    }
    throw InvalidArgument("unknown method '" + name + "'");
}

// ---------------------------------------------------------------------------
// Distance matrices

std::size_t DistanceMatrix::index_of(const std::string& id) const {
    const auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) {
        throw UnknownId("unknown video id '" + id + "'");
    }
    return static_cast<std::size_t>(it - ids.begin());
}

double pair_distance(const GeoVideo& a, const GeoVideo& b, const MethodSpec& spec) {
    switch (spec.kind()) {
    case MethodSpec::Kind::lcss:
        return lcss_distance(a, b, LcssParams{spec.epsilon(), spec.sigma()});
    case MethodSpec::Kind::hausdorff:
        return hausdorff_distance(a, b);
    default:
        return lcvs_distance(a, b, LcvsParams{spec.sigma(), *spec.approx()});
    }
}

DistanceMatrix distance_matrix(std::span<const GeoVideo> videos, const MethodSpec& spec,
                               unsigned threads) {
    const std::size_t n = videos.size();
    if (n < 2) {
        throw InvalidArgument("distance matrix needs at least two videos");
    }
    DistanceMatrix m;
    m.normalized = spec.normalized();
    m.ids.reserve(n);
    for (const GeoVideo& v : videos) {
        m.ids.push_back(v.id());
    }
    if (std::set<std::string>(m.ids.begin(), m.ids.end()).size() != n) {
        throw InvalidArgument("video ids must be unique");
    }
    m.values.assign(n * n, 0.0);

    std::vector<std::vector<ViewRegion>> regions;
    if (spec.approx()) {
        regions.reserve(n);
        for (const GeoVideo& v : videos) {
            regions.push_back(prepare_regions(v, *spec.approx()));
        }
    }
    auto compute = [&](std::size_t i, std::size_t j) {
        if (spec.approx()) {
            const double score = lcvs_score(regions[i], regions[j], spec.sigma());
            return distance_from_score(score, videos[i].size(), videos[j].size());
        }
        return pair_distance(videos[i], videos[j], spec);
    };

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            pairs.emplace_back(i, j);
        }
    }

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, pairs.size()));

    std::vector<double> results(pairs.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = pairs.size();
    std::exception_ptr error;

    auto work = [&]() {
        for (std::size_t p = next++; p < pairs.size(); p = next++) {
            try {
                results[p] = compute(pairs[p].first, pairs[p].second);
            } catch (...) {
                // Keep the lowest failing pair so the reported error is deterministic.
                std::lock_guard lock(error_mutex);
                if (p < error_index) {
                    error_index = p;
                    error = std::current_exception();
                }
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }

    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        m.values[i * n + j] = results[p];
        m.values[j * n + i] = results[p];
    }
    for (std::size_t i = 0; i < n; ++i) {
        // An empty video is at distance 1 even from itself.
        m.values[i * n + i] = (spec.normalized() && videos[i].empty()) ? 1.0 : 0.0;
    }
    return m;
}

std::vector<std::string> knn(const DistanceMatrix& m, const std::string& query, std::size_t k) {
    const std::size_t q = m.index_of(query);
    if (k >= m.size()) {
        throw InvalidArgument("k must be smaller than the number of videos");
    }
    std::vector<std::size_t> others;
    others.reserve(m.size() - 1);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i != q) {
            others.push_back(i);
        }
    }
    std::sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(m.values[q * m.size() + a], m.ids[a]) <
               std::tie(m.values[q * m.size() + b], m.ids[b]);
    });
    std::vector<std::string> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.push_back(m.ids[others[i]]);
    }
    return out;
}

double accuracy_eval(const DistanceMatrix& method, const DistanceMatrix& oracle, std::size_t k) {
    if (std::set<std::string>(method.ids.begin(), method.ids.end()) !=
            std::set<std::string>(oracle.ids.begin(), oracle.ids.end()) ||
        method.size() != oracle.size()) {
        throw IdMismatch("method and oracle matrices cover different videos");
    }
    if (k < 1) {
        throw InvalidArgument("k must be at least 1");
    }
    double total = 0;
    for (const std::string& id : method.ids) {
        auto a = knn(method, id, k);
        auto b = knn(oracle, id, k);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        std::vector<std::string> common;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
        total += static_cast<double>(common.size()) / static_cast<double>(k);
    }
    return total / static_cast<double>(method.size());
}

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::string matrix_to_csv(const DistanceMatrix& m) {
    std::string out = "id";
    for (const auto& id : m.ids) {
        out += "," + id;
    }
    out += "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += m.ids[i];
        for (std::size_t j = 0; j < m.size(); ++j) {
            out += "," + format_number(m.at(i, j));
        }
        out += "\n";
    }
    return out;
}

DistanceMatrix matrix_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    auto cells_of = [](const std::string& l) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(l);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        return cells;
    };

    DistanceMatrix m;
    if (!std::getline(in, line)) {
        throw ParseError("empty matrix file");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    auto header = cells_of(line);
    if (header.size() < 2 || header[0] != "id") {
        throw ParseError("matrix header must start with 'id'", line_no);
    }
    m.ids.assign(header.begin() + 1, header.end());
    const std::size_t n = m.ids.size();
    m.values.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) {
            throw ParseError("matrix has fewer rows than ids", line_no + 1);
        }
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        auto cells = cells_of(line);
        if (cells.size() != n + 1 || cells[0] != m.ids[i]) {
            throw ParseError("matrix row does not match the header", line_no);
        }
        for (std::size_t j = 1; j <= n; ++j) {
            double v = 0;
            const auto& c = cells[j];
            const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc{} || ptr != c.data() + c.size()) {
                throw ParseError("malformed distance '" + c + "'", line_no);
            }
            m.values.push_back(v);
        }
    }
    m.normalized = std::all_of(m.values.begin(), m.values.end(),
                               [](double v) { return v >= 0 && v <= 1; });
    return m;
}

// ---------------------------------------------------------------------------
// Experiments

void ExperimentReport::sort_rows() {
    std::stable_sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
        return std::make_tuple(a.sweep_value, a.method, to_string(a.mode)) <
               std::make_tuple(b.sweep_value, b.method, to_string(b.mode));
    });
}

const ExperimentRow* ExperimentReport::find(double sweep_value, const std::string& method,
                                            DirectionMode mode) const {
    for (const auto& row : rows) {
        if (row.sweep_value == sweep_value && row.method == method && row.mode == mode) {
            return &row;
        }
    }
    return nullptr;
}

std::vector<MethodSpec> default_methods(double segment_angle, double epsilon, unsigned sigma) {
    return {MethodSpec::lcss(epsilon, sigma), MethodSpec::lcvs(ApproxMethod::mbs(segment_angle), sigma),
            MethodSpec::lcvs(ApproxMethod::mbt(), sigma), MethodSpec::lcvs(ApproxMethod::mbr(), sigma)};
}

namespace {

struct TimedMatrix {
    DistanceMatrix matrix;
    double seconds;
};

TimedMatrix timed_matrix(std::span<const GeoVideo> videos, const MethodSpec& spec) {
    const auto start = std::chrono::steady_clock::now();
    DistanceMatrix m = distance_matrix(videos, spec, 1);
    const auto stop = std::chrono::steady_clock::now();
    return {std::move(m), std::chrono::duration<double>(stop - start).count()};
}

// One sweep level: every mode, every method, accuracy against the oracle.
void run_level(const SynthConfig& cfg, double sweep_value, const ExperimentOptions& opts,
               ExperimentReport& report) {
    if (opts.methods.empty()) {
        throw InvalidArgument("experiment needs at least one method");
    }
    if (cfg.n_videos <= opts.k) {
        throw InvalidArgument("sweep level " + format_number(sweep_value) + " has " +
                              std::to_string(cfg.n_videos) + " videos, need more than k = " +
                              std::to_string(opts.k));
    }
    const MethodSpec oracle_spec = MethodSpec::lcvs(ApproxMethod::oracle(), opts.sigma);
    for (DirectionMode mode : opts.modes) {
        SynthConfig level_cfg = cfg;
        level_cfg.direction_mode = mode;
        const auto videos = synthesize(level_cfg);

        std::optional<TimedMatrix> oracle_timed;
        const bool oracle_listed = std::any_of(opts.methods.begin(), opts.methods.end(), [](const auto& m) {
            return m.kind() == MethodSpec::Kind::lcvs_oracle;
        });
        DistanceMatrix oracle;
        if (oracle_listed) {
            oracle_timed = timed_matrix(videos, oracle_spec);
            oracle = oracle_timed->matrix;
        } else {
            oracle = distance_matrix(videos, oracle_spec, opts.threads);
        }

        for (const MethodSpec& spec : opts.methods) {
            TimedMatrix tm = spec.kind() == MethodSpec::Kind::lcvs_oracle && spec.sigma() == opts.sigma
                                 ? *oracle_timed
                                 : timed_matrix(videos, spec);
            ExperimentRow row;
            row.sweep_value = sweep_value;
            row.method = spec.name();
            row.mode = mode;
            row.accuracy = accuracy_eval(tm.matrix, oracle, opts.k);
            row.wall_time_s = tm.seconds;
            row.n_videos = level_cfg.n_videos;
            row.frames_per_video = level_cfg.frames_per_video;
            row.seed = level_cfg.seed;
            report.rows.push_back(std::move(row));
        }
    }
}

} // namespace

ExperimentReport run_experiment_fov_count(const SynthConfig& base, std::span<const double> levels,
                                          const ExperimentOptions& opts) {
    if (levels.size() < 2) {
        throw InvalidArgument("a sweep needs at least two levels");
    }
    ExperimentReport report;
    for (double level : levels) {
        SynthConfig cfg = base;
        cfg.n_videos = static_cast<std::size_t>(
            std::llround(level / static_cast<double>(base.frames_per_video)));
        run_level(cfg, level, opts, report);
    }
    report.sort_rows();
    return report;
}

ExperimentReport run_experiment_view_distance(const SynthConfig& base, std::span<const double> levels,
                                              const ExperimentOptions& opts) {
    if (levels.size() < 2) {
        throw InvalidArgument("a sweep needs at least two levels");
    }
    ExperimentReport report;
    for (double level : levels) {
        SynthConfig cfg = base;
        cfg.r = level;
        run_level(cfg, level, opts, report);
    }
    report.sort_rows();
    return report;
}

// ---------------------------------------------------------------------------
// Report files

std::string report_to_csv(const ExperimentReport& r) {
    std::string out = "sweep_value,method,mode,accuracy,wall_time_s,n_videos,frames_per_video,seed\n";
    for (const auto& row : r.rows) {
        out += format_number(row.sweep_value) + "," + row.method + "," + to_string(row.mode) + "," +
               format_number(row.accuracy) + "," + format_number(row.wall_time_s) + "," +
               std::to_string(row.n_videos) + "," + std::to_string(row.frames_per_video) + "," +
               std::to_string(row.seed) + "\n";
    }
    return out;
}

std::string report_to_json(const ExperimentReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"sweep_value", row.sweep_value},
                        {"method", row.method},
                        {"mode", to_string(row.mode)},
                        {"accuracy", row.accuracy},
                        {"wall_time_s", row.wall_time_s},
                        {"n_videos", row.n_videos},
                        {"frames_per_video", row.frames_per_video},
                        {"seed", row.seed}});
    }
    return json{{"rows", std::move(rows)}}.dump(1) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
    ExperimentReport r;
    try {
        const json doc = json::parse(text);
        for (const json& j : doc.at("rows")) {
            ExperimentRow row;
            row.sweep_value = j.at("sweep_value").get<double>();
            row.method = j.at("method").get<std::string>();
            row.mode = parse_direction_mode(j.at("mode").get<std::string>());
            row.accuracy = j.at("accuracy").get<double>();
            row.wall_time_s = j.at("wall_time_s").get<double>();
            row.n_videos = j.at("n_videos").get<std::size_t>();
            row.frames_per_video = j.at("frames_per_video").get<std::size_t>();
            row.seed = j.at("seed").get<std::uint64_t>();
            r.rows.push_back(std::move(row));
        }
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed report JSON: ") + e.what());
    } catch (const json::exception& e) {
        throw SchemaError(std::string("report JSON: ") + e.what());
    }
    return r;
}

void emit_report(const ExperimentReport& r, const std::filesystem::path& path, ReportFormat format) {
    write_file(path, format == ReportFormat::csv ? report_to_csv(r) : report_to_json(r));
}

} // namespace lcvs
