#include "lcvs/geometry.hpp"

#include "lcvs/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

namespace lcvs {

namespace {

constexpr double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double r) { return r * 180.0 / std::numbers::pi; }

bool bearing_in_span(double bearing, const FoV& f) {
    return bearing_difference(bearing, f.theta()) <= f.delta() / 2 + kGeomTolerance;
}

// Signed distance of p from the directed line a->b, positive on the left.
double side(Point a, Point b, Point p) {
    const Point e = b - a;
    const double len = std::hypot(e.x, e.y);
    return len > 0 ? cross(e, p - a) / len : 0.0;
}

// Strict weak order on the geometric fields, to put cvw arguments in a
// canonical order.
bool region_less(const FoV& a, const FoV& b) {
    return std::make_tuple(a.position().x, a.position().y, a.r(), a.theta(), a.delta()) <
           std::make_tuple(b.position().x, b.position().y, b.r(), b.theta(), b.delta());
}

} // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point bearing_vector(double bearing_deg) {
    const double rad = deg_to_rad(bearing_deg);
    return {std::sin(rad), std::cos(rad)};
}

double bearing_of(Point d) {
    if (d.x == 0 && d.y == 0) {
        return 0;
    }
    return normalize_bearing(rad_to_deg(std::atan2(d.x, d.y)));
}

double normalize_bearing(double deg) {
    double b = std::fmod(deg, 360.0);
    if (b < 0) {
        b += 360.0;
    }
    // fmod of a tiny negative value can round up to exactly 360
    return b >= 360.0 ? 0.0 : b;
}

double bearing_difference(double a_deg, double b_deg) {
    const double d = normalize_bearing(a_deg - b_deg);
    return d > 180.0 ? 360.0 - d : d;
}

// ---------------------------------------------------------------------------
// FoV

FoV::FoV(Point position, double r, double theta, double delta, std::int64_t t)
    : m_position(position), m_r(r), m_theta(0), m_delta(delta), m_t(t) {
    if (!std::isfinite(position.x) || !std::isfinite(position.y)) {
        throw InvalidArgument("FoV position must be finite");
    }
    if (!(r > 0) || !std::isfinite(r)) {
        throw InvalidArgument("FoV radius must be positive, got " + std::to_string(r));
    }
    if (!(delta > 0 && delta < 180)) {
        throw InvalidArgument("FoV lens angle must be in (0, 180), got " + std::to_string(delta));
    }
    if (!std::isfinite(theta)) {
        throw InvalidArgument("FoV direction must be finite");
    }
    if (t < 0) {
        throw InvalidArgument("FoV frame index must be non-negative");
    }
    m_theta = normalize_bearing(theta);
}

// ---------------------------------------------------------------------------
// ConvexPolygon

ConvexPolygon ConvexPolygon::from_vertices(std::vector<Point> v) {
    if (v.empty()) {
        return {};
    }
    const std::size_t n = v.size();
    if (n < 3) {
        throw InvalidArgument("convex polygon needs at least 3 vertices");
    }
    double turning = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = v[i];
        const Point b = v[(i + 1) % n];
        const Point c = v[(i + 2) % n];
        if (a == b) {
            throw InvalidArgument("convex polygon has repeated vertices");
        }
        if (side(a, b, c) < -kGeomTolerance) {
            throw InvalidArgument("polygon is not convex and counter-clockwise");
        }
        turning += std::atan2(cross(b - a, c - b), dot(b - a, c - b));
    }
    // A left-turning star winds more than once.
    if (std::abs(turning - 2 * std::numbers::pi) > 1e-6) {
        throw InvalidArgument("polygon is self-intersecting");
    }
    return ConvexPolygon(unchecked_t{}, std::move(v));
}

Box ConvexPolygon::bounds() const {
    if (m_vertices.empty()) {
        return {};
    }
    Box b{m_vertices[0].x, m_vertices[0].y, m_vertices[0].x, m_vertices[0].y};
    for (const Point& p : m_vertices) {
        b.min_x = std::min(b.min_x, p.x);
        b.min_y = std::min(b.min_y, p.y);
        b.max_x = std::max(b.max_x, p.x);
        b.max_y = std::max(b.max_y, p.y);
    }
    return b;
}

bool ConvexPolygon::contains(Point p) const {
    const std::size_t n = m_vertices.size();
    if (n == 0) {
        return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (side(m_vertices[i], m_vertices[(i + 1) % n], p) < -kGeomTolerance) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Approximations

ApproxMethod ApproxMethod::mbs(double segment_angle) {
    if (!(segment_angle > 0 && segment_angle <= 45)) {
        throw InvalidArgument("MBS segment angle must be in (0, 45], got " +
                              std::to_string(segment_angle));
    }
    return ApproxMethod(Kind::mbs, segment_angle);
}

int fan_segments(double delta, double segment_angle) {
    // The slack keeps exact ratios such as 60 / 5 from rounding up to 13.
    return std::max(1, static_cast<int>(std::ceil(delta / segment_angle - 1e-9)));
}

bool sector_contains(const FoV& fov, Point p) {
    const Point d = p - fov.position();
    const double range = std::hypot(d.x, d.y);
    if (range > fov.r() + kGeomTolerance) {
        return false;
    }
    if (range == 0) {
        return true;
    }
    return bearing_in_span(bearing_of(d), fov);
}

Box sector_bounds(const FoV& fov) {
    const Point apex = fov.position();
    const double half = fov.delta() / 2;
    Box b{apex.x, apex.y, apex.x, apex.y};
    auto include = [&b](Point p) {
        b.min_x = std::min(b.min_x, p.x);
        b.min_y = std::min(b.min_y, p.y);
        b.max_x = std::max(b.max_x, p.x);
        b.max_y = std::max(b.max_y, p.y);
    };
    include(apex + fov.r() * bearing_vector(fov.theta() - half));
    include(apex + fov.r() * bearing_vector(fov.theta() + half));
    // Compass extremes are set exactly rather than through sin/cos.
    if (bearing_in_span(0, fov)) {
        b.max_y = std::max(b.max_y, apex.y + fov.r());
    }
    if (bearing_in_span(90, fov)) {
        b.max_x = std::max(b.max_x, apex.x + fov.r());
    }
    if (bearing_in_span(180, fov)) {
        b.min_y = std::min(b.min_y, apex.y - fov.r());
    }
    if (bearing_in_span(270, fov)) {
        b.min_x = std::min(b.min_x, apex.x - fov.r());
    }
    return b;
}

ConvexPolygon view_polygon(const FoV& fov, ApproxMethod method) {
    const Point apex = fov.position();
    const double half = fov.delta() / 2;
    std::vector<Point> v;

    switch (method.kind()) {
    case ApproxMethod::Kind::mbs:
    case ApproxMethod::Kind::oracle: {
        const int k = fan_segments(fov.delta(), method.segment_angle());
        const double step = fov.delta() / k;
        v.reserve(static_cast<std::size_t>(k) + 2);
        v.push_back(apex);
        // Bearings grow clockwise, so walk the arc from the right edge back to
        // the left edge to stay counter-clockwise.
        for (int i = k; i >= 0; --i) {
            v.push_back(apex + fov.r() * bearing_vector(fov.theta() - half + i * step));
        }
        break;
    }
    case ApproxMethod::Kind::mbt: {
        const double reach = fov.r() / std::cos(deg_to_rad(half));
        v = {apex, apex + reach * bearing_vector(fov.theta() + half),
             apex + reach * bearing_vector(fov.theta() - half)};
        break;
    }
    case ApproxMethod::Kind::mbr: {
        const Box b = sector_bounds(fov);
        v = {{b.min_x, b.min_y}, {b.max_x, b.min_y}, {b.max_x, b.max_y}, {b.min_x, b.max_y}};
        break;
    }
    }
    return ConvexPolygon::from_vertices(std::move(v));
}

double polygon_area(const ConvexPolygon& p) {
    const auto v = p.vertices();
    if (v.size() < 3) {
        return 0;
    }
    // Shoelace relative to the first vertex to keep large coordinates exact-ish.
    double twice = 0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        twice += cross(v[i] - v[0], v[i + 1] - v[0]);
    }
    return std::max(0.0, twice / 2);
}

ConvexPolygon clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clipper) {
    if (subject.empty() || clipper.empty()) {
        return {};
    }
    std::vector<Point> current(subject.vertices().begin(), subject.vertices().end());
    std::vector<Point> next;
    std::vector<double> sides;
    const auto edges = clipper.vertices();

    for (std::size_t e = 0; e < edges.size() && !current.empty(); ++e) {
        const Point a = edges[e];
        const Point b = edges[(e + 1) % edges.size()];
        sides.resize(current.size());
        bool all_inside = true;
        for (std::size_t i = 0; i < current.size(); ++i) {
            sides[i] = side(a, b, current[i]);
            all_inside = all_inside && sides[i] >= -kGeomTolerance;
        }
        if (all_inside) {
            continue;
        }
        next.clear();
        for (std::size_t i = 0; i < current.size(); ++i) {
            const std::size_t prev = (i + current.size() - 1) % current.size();
            const bool in_cur = sides[i] >= -kGeomTolerance;
            const bool in_prev = sides[prev] >= -kGeomTolerance;
            if (in_cur != in_prev) {
                const double t = sides[prev] / (sides[prev] - sides[i]);
                next.push_back(current[prev] + t * (current[i] - current[prev]));
            }
            if (in_cur) {
                next.push_back(current[i]);
            }
        }
        current.swap(next);
    }

    // Crossing points can coincide with kept vertices; drop the duplicates.
    std::vector<Point> out;
    out.reserve(current.size());
    for (const Point& p : current) {
        if (out.empty() || distance(out.back(), p) > kGeomTolerance) {
            out.push_back(p);
        }
    }
    while (out.size() > 1 && distance(out.front(), out.back()) <= kGeomTolerance) {
        out.pop_back();
    }
    if (out.size() < 3) {
        return {};
    }
    return ConvexPolygon(ConvexPolygon::unchecked_t{}, std::move(out));
}

double convex_intersection_area(const ConvexPolygon& p, const ConvexPolygon& q) {
    if (p.empty() || q.empty() || !p.bounds().overlaps(q.bounds())) {
        return 0;
    }
    const double area = polygon_area(clip_convex(p, q));
    return area < kGeomTolerance ? 0.0 : area;
}

// ---------------------------------------------------------------------------
// Common view weight

ViewRegion make_view_region(const FoV& fov, ApproxMethod method) {
    ConvexPolygon poly = view_polygon(fov, method);
    const double area = polygon_area(poly);
    const Box bounds = poly.bounds();
    return ViewRegion{fov, std::move(poly), area, bounds};
}

double cvw(const ViewRegion& a, const ViewRegion& b) {
    const ViewRegion& first = region_less(b.fov, a.fov) ? b : a;
    const ViewRegion& second = &first == &a ? b : a;

    if (first.fov.same_region(second.fov)) {
        return first.area < kMinUnionArea ? 0.0 : 1.0;
    }
    if (!first.bounds.overlaps(second.bounds)) {
        return 0;
    }
    const double inter = convex_intersection_area(first.polygon, second.polygon);
    const double uni = first.area + second.area - inter;
    if (uni < kMinUnionArea) {
        return 0;
    }
    return std::clamp(inter / uni, 0.0, 1.0);
}

double cvw(const FoV& a, const FoV& b, ApproxMethod method) {
    return cvw(make_view_region(a, method), make_view_region(b, method));
}

double cvw_grid_oracle(const FoV& a, const FoV& b, double cell, std::int64_t max_cells) {
    if (!(cell > 0)) {
        throw InvalidArgument("grid cell size must be positive");
    }
    const Box ba = sector_bounds(a);
    const Box bb = sector_bounds(b);
    const double ox = std::min(ba.min_x, bb.min_x);
    const double oy = std::min(ba.min_y, bb.min_y);

    struct Range {
        std::int64_t lo_x, hi_x, lo_y, hi_y;
        std::int64_t cells() const {
            return (hi_x < lo_x || hi_y < lo_y) ? 0 : (hi_x - lo_x + 1) * (hi_y - lo_y + 1);
        }
    };
    // Cells whose centers fall inside the box.
    auto range_of = [&](const Box& box) {
        auto lo = [&](double v, double o) {
            return static_cast<std::int64_t>(std::ceil((v - o) / cell - 0.5));
        };
        auto hi = [&](double v, double o) {
            return static_cast<std::int64_t>(std::floor((v - o) / cell - 0.5));
        };
        return Range{lo(box.min_x, ox), hi(box.max_x, ox), lo(box.min_y, oy), hi(box.max_y, oy)};
    };

    const Range ra = range_of(ba);
    const Range rb = range_of(bb);
    const Range rboth{std::max(ra.lo_x, rb.lo_x), std::min(ra.hi_x, rb.hi_x),
                      std::max(ra.lo_y, rb.lo_y), std::min(ra.hi_y, rb.hi_y)};

    if (ra.cells() + rb.cells() + rboth.cells() > max_cells) {
        throw GridTooLarge("grid oracle would visit " +
                           std::to_string(ra.cells() + rb.cells() + rboth.cells()) +
                           " cells, budget is " + std::to_string(max_cells));
    }

    auto center = [&](std::int64_t i, std::int64_t j) {
        return Point{ox + (static_cast<double>(i) + 0.5) * cell,
                     oy + (static_cast<double>(j) + 0.5) * cell};
    };
    auto count = [&](const Range& r, auto&& pred) {
        std::int64_t n = 0;
        for (std::int64_t j = r.lo_y; j <= r.hi_y; ++j) {
            for (std::int64_t i = r.lo_x; i <= r.hi_x; ++i) {
                n += pred(center(i, j)) ? 1 : 0;
            }
        }
        return n;
    };

    const std::int64_t in_a = count(ra, [&](Point p) { return sector_contains(a, p); });
    const std::int64_t in_b = count(rb, [&](Point p) { return sector_contains(b, p); });
    const std::int64_t in_both =
        count(rboth, [&](Point p) { return sector_contains(a, p) && sector_contains(b, p); });
    const std::int64_t in_either = in_a + in_b - in_both;
    return in_either == 0 ? 0.0 : static_cast<double>(in_both) / static_cast<double>(in_either);
}

} // namespace lcvs
