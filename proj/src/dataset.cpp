#include "lcvs/dataset.hpp"

#include "lcvs/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace lcvs {

using nlohmann::json;

namespace {

double cos_deg(double d) { return std::cos(d * std::numbers::pi / 180.0); }

void check_lat_lon(double lat, double lon, const std::string& where) {
    if (!std::isfinite(lat) || !std::isfinite(lon) || std::abs(lat) > 90 || std::abs(lon) > 180) {
        throw InvalidArgument(where + ": latitude/longitude out of range");
    }
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

std::optional<double> parse_double(const std::string& s) {
    double v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first != last && *first == ' ') {
        ++first;
    }
    while (last != first && *(last - 1) == ' ') {
        --last;
    }
    if (first != last && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

const json& require(const json& obj, const char* field, const std::string& where) {
    if (!obj.is_object() || !obj.contains(field)) {
        throw SchemaError(where + ": missing field '" + field + "'");
    }
    return obj.at(field);
}

double require_number(const json& obj, const char* field, const std::string& where) {
    const json& v = require(obj, field, where);
    if (!v.is_number()) {
        throw SchemaError(where + ": field '" + std::string(field) + "' must be a number");
    }
    return v.get<double>();
}

std::string zero_padded_id(std::size_t i, std::size_t n) {
    std::string digits = std::to_string(i);
    const std::size_t width = std::max<std::size_t>(3, std::to_string(n > 0 ? n - 1 : 0).size());
    if (digits.size() < width) {
        digits.insert(0, width - digits.size(), '0');
    }
    return "v" + digits;
}

} // namespace

// ---------------------------------------------------------------------------
// Projection

ProjectionContext centroid(std::span<const GeoSample> samples) {
    if (samples.empty()) {
        throw EmptyInput("cannot take the centroid of zero samples");
    }
    double lat = 0;
    double lon = 0;
    for (const GeoSample& s : samples) {
        lat += s.lat;
        lon += s.lon;
    }
    const auto n = static_cast<double>(samples.size());
    return {lat / n, lon / n};
}

Point project(const GeoSample& s, const ProjectionContext& ctx) {
    return {(s.lon - ctx.lon0) * cos_deg(ctx.lat0) * kMetersPerDegreeLon,
            (s.lat - ctx.lat0) * kMetersPerDegreeLat};
}

std::vector<Point> project(std::span<const GeoSample> samples, const ProjectionContext& ctx) {
    std::vector<Point> out;
    out.reserve(samples.size());
    for (const GeoSample& s : samples) {
        out.push_back(project(s, ctx));
    }
    return out;
}

std::pair<double, double> unproject(Point p, const ProjectionContext& ctx) {
    return {ctx.lat0 + p.y / kMetersPerDegreeLat,
            ctx.lon0 + p.x / (cos_deg(ctx.lat0) * kMetersPerDegreeLon)};
}

double derive_heading(Point from, Point to) {
    if (from == to) {
        throw DegenerateStep("heading is undefined for a zero-length step");
    }
    return bearing_of(to - from);
}

std::vector<double> headings_for(std::span<const Point> path, std::span<const GeoSample> samples) {
    const std::size_t n = path.size();
    std::vector<std::optional<double>> step(n);
    for (std::size_t i = 1; i < n; ++i) {
        try {
            step[i] = derive_heading(path[i - 1], path[i]);
        } catch (const DegenerateStep&) {
            step[i] = step[i - 1];
        }
    }
    // Leading frames (frame 0 and any standing-still prefix) take the first
    // defined heading.
    std::optional<double> first;
    for (const auto& h : step) {
        if (h) {
            first = h;
            break;
        }
    }
    std::vector<double> out(n, first.value_or(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (step[i]) {
            out[i] = *step[i];
        }
        if (i < samples.size() && samples[i].course) {
            out[i] = normalize_bearing(*samples[i].course);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Readers

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << contents;
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

std::vector<GeoSample> read_gps_csv(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;

    auto next_line = [&]() {
        if (!std::getline(in, line)) {
            return false;
        }
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        return true;
    };

    if (!next_line()) {
        throw EmptyInput("'" + path.string() + "' is empty");
    }
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
        line.erase(0, 3);
    }
    bool has_course = false;
    if (line == "t,lat,lon,course") {
        has_course = true;
    } else if (line != "t,lat,lon") {
        throw ParseError("header must be 't,lat,lon' or 't,lat,lon,course'", line_no);
    }
    const std::size_t columns = has_course ? 4 : 3;

    std::vector<GeoSample> out;
    while (next_line()) {
        if (line.empty()) {
            continue;
        }
        const auto cells = split_commas(line);
        if (cells.size() != columns) {
            throw ParseError("expected " + std::to_string(columns) + " columns, got " +
                                 std::to_string(cells.size()),
                             line_no);
        }
        GeoSample s;
        const auto t = parse_double(cells[0]);
        const auto lat = parse_double(cells[1]);
        const auto lon = parse_double(cells[2]);
        if (!t || !lat || !lon) {
            throw ParseError("malformed number", line_no);
        }
        s.t_epoch = *t;
        s.lat = *lat;
        s.lon = *lon;
        if (std::abs(s.lat) > 90 || std::abs(s.lon) > 180) {
            throw ParseError("latitude/longitude out of range", line_no);
        }
        if (has_course && !cells[3].empty()) {
            const auto course = parse_double(cells[3]);
            if (!course) {
                throw ParseError("malformed course", line_no);
            }
            s.course = *course;
        }
        if (!out.empty() && s.t_epoch < out.back().t_epoch) {
            throw ParseError("rows are not sorted by time", line_no);
        }
        out.push_back(s);
    }
    if (out.empty()) {
        throw EmptyInput("'" + path.string() + "' has no data rows");
    }
    return out;
}

std::vector<GeoSample> read_bdd100k_info(const std::filesystem::path& path) {
    const std::string where = path.filename().string();
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw SchemaError(where + ": malformed JSON: " + e.what());
    }
    const json& locations = require(doc, "locations", where);
    if (!locations.is_array()) {
        throw SchemaError(where + ": field 'locations' must be an array");
    }
    std::vector<GeoSample> out;
    out.reserve(locations.size());
    for (std::size_t i = 0; i < locations.size(); ++i) {
        const json& loc = locations[i];
        const std::string here = where + ": locations[" + std::to_string(i) + "]";
        GeoSample s;
        // BDD100K timestamps are milliseconds since the epoch.
        s.t_epoch = require_number(loc, "timestamp", here) / 1000.0;
        s.lat = require_number(loc, "latitude", here);
        s.lon = require_number(loc, "longitude", here);
        if (std::abs(s.lat) > 90 || std::abs(s.lon) > 180) {
            throw SchemaError(here + ": latitude/longitude out of range");
        }
        // Negative course is the "invalid" sentinel of phone location APIs.
        if (loc.contains("course") && loc["course"].is_number() && loc["course"].get<double>() >= 0) {
            s.course = loc["course"].get<double>();
        }
        out.push_back(s);
    }
    if (out.empty()) {
        throw EmptyInput(where + ": no locations");
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const GeoSample& a, const GeoSample& b) { return a.t_epoch < b.t_epoch; });
    return out;
}

GeoVideo build_video(std::string id, std::span<const GeoSample> samples,
                     const ProjectionContext& ctx, double r, double delta) {
    for (const GeoSample& s : samples) {
        check_lat_lon(s.lat, s.lon, id);
    }
    const auto path = project(samples, ctx);
    const auto headings = headings_for(path, samples);
    std::vector<FoV> fovs;
    fovs.reserve(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        fovs.emplace_back(path[i], r, headings[i], delta, static_cast<std::int64_t>(i));
    }
    return GeoVideo(std::move(id), std::move(fovs));
}

IngestResult ingest_csv(const std::filesystem::path& path, double r, double delta) {
    const auto samples = read_gps_csv(path);
    const auto ctx = centroid(samples);
    return {build_video(path.stem().string(), samples, ctx, r, delta), ctx};
}

IngestResult ingest_bdd100k_info(const std::filesystem::path& path, double r, double delta) {
    const auto samples = read_bdd100k_info(path);
    const auto ctx = centroid(samples);
    return {build_video(path.stem().string(), samples, ctx, r, delta), ctx};
}

// ---------------------------------------------------------------------------
// Synthesis

std::string to_string(DirectionMode m) { return m == DirectionMode::straight ? "straight" : "random"; }

DirectionMode parse_direction_mode(const std::string& s) {
    if (s == "straight") {
        return DirectionMode::straight;
    }
    if (s == "random") {
        return DirectionMode::random;
    }
    throw InvalidArgument("direction mode must be 'straight' or 'random', got '" + s + "'");
}

void SynthConfig::validate() const {
    if (n_videos < 1 || frames_per_video < 1) {
        throw InvalidArgument("synthetic dataset needs at least one video and one frame");
    }
    if (!(r > 0)) {
        throw InvalidArgument("viewable distance must be positive");
    }
    if (!(delta > 0 && delta < 180)) {
        throw InvalidArgument("lens angle must be in (0, 180)");
    }
    if (!(extent > 0) || !(step > 0) || !(heading_jitter >= 0)) {
        throw InvalidArgument("extent and step must be positive, jitter non-negative");
    }
}

std::vector<GeoVideo> synthesize(const SynthConfig& cfg) {
    cfg.validate();
    SplitMix64 rng(cfg.seed);
    const bool random_dir = cfg.direction_mode == DirectionMode::random;

    std::vector<GeoVideo> out;
    out.reserve(cfg.n_videos);
    for (std::size_t v = 0; v < cfg.n_videos; ++v) {
        Point pos{rng.uniform() * cfg.extent, rng.uniform() * cfg.extent};
        double heading = rng.uniform() * 360.0;
        std::vector<FoV> fovs;
        fovs.reserve(cfg.frames_per_video);
        for (std::size_t i = 0; i < cfg.frames_per_video; ++i) {
            if (i >= 1) {
                if (i >= 2) {
                    heading = normalize_bearing(heading + (2 * rng.uniform() - 1) * cfg.heading_jitter);
                }
                pos = pos + cfg.step * bearing_vector(heading);
            }
            const double theta = random_dir ? rng.uniform() * 360.0 : heading;
            fovs.emplace_back(pos, cfg.r, theta, cfg.delta, static_cast<std::int64_t>(i));
        }
        out.emplace_back(zero_padded_id(v, cfg.n_videos), std::move(fovs));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Trajectory JSON

std::string dataset_to_json(const Dataset& d) {
    json videos = json::array();
    for (const GeoVideo& v : d.videos) {
        json frames = json::array();
        for (const FoV& f : v.fovs()) {
            frames.push_back({{"t", f.t()},
                              {"x", f.position().x},
                              {"y", f.position().y},
                              {"theta", f.theta()},
                              {"r", f.r()},
                              {"delta", f.delta()}});
        }
        videos.push_back({{"id", v.id()}, {"frames", std::move(frames)}});
    }
    json doc = {{"videos", std::move(videos)}};
    if (d.projection) {
        doc["projection"] = {{"lat0", d.projection->lat0}, {"lon0", d.projection->lon0}};
    }
    return doc.dump(1) + "\n";
}

Dataset dataset_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed trajectory JSON: ") + e.what());
    }
    const json& videos = require(doc, "videos", "trajectory file");
    if (!videos.is_array()) {
        throw SchemaError("trajectory file: 'videos' must be an array");
    }
    Dataset d;
    for (std::size_t vi = 0; vi < videos.size(); ++vi) {
        const std::string where = "videos[" + std::to_string(vi) + "]";
        const json& jv = videos[vi];
        const json& id = require(jv, "id", where);
        if (!id.is_string()) {
            throw SchemaError(where + ": 'id' must be a string");
        }
        const json& frames = require(jv, "frames", where);
        if (!frames.is_array()) {
            throw SchemaError(where + ": 'frames' must be an array");
        }
        std::vector<FoV> fovs;
        fovs.reserve(frames.size());
        for (std::size_t fi = 0; fi < frames.size(); ++fi) {
            const std::string here = where + ".frames[" + std::to_string(fi) + "]";
            const json& jf = frames[fi];
            const json& t = require(jf, "t", here);
            if (!t.is_number_integer()) {
                throw SchemaError(here + ": 't' must be an integer");
            }
            try {
                fovs.emplace_back(Point{require_number(jf, "x", here), require_number(jf, "y", here)},
                                  require_number(jf, "r", here), require_number(jf, "theta", here),
                                  require_number(jf, "delta", here), t.get<std::int64_t>());
            } catch (const InvalidArgument& e) {
                throw SchemaError(here + ": " + e.what());
            }
        }
        try {
            d.videos.emplace_back(id.get<std::string>(), std::move(fovs));
        } catch (const InvalidArgument& e) {
            throw SchemaError(where + ": " + e.what());
        }
    }
    if (doc.contains("projection")) {
        const json& p = doc["projection"];
        d.projection = ProjectionContext{require_number(p, "lat0", "projection"),
                                         require_number(p, "lon0", "projection")};
    }
    return d;
}

void save_trajectories(const Dataset& d, const std::filesystem::path& path) {
    write_file(path, dataset_to_json(d));
}

Dataset load_trajectories(const std::filesystem::path& path) {
    return dataset_from_json(read_file(path));
}

} // namespace lcvs
