#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lcvs {

/// Linear tolerance (meters) for collinearity and membership tests, also the
/// area (m^2) below which an intersection counts as measure-zero.
inline constexpr double kGeomTolerance = 1e-9;

/// Union areas below this make the common view weight 0.
inline constexpr double kMinUnionArea = 1e-12;

struct Point {
    double x = 0;
    double y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

double distance(Point a, Point b);

/// Unit vector for a compass bearing in degrees (0 = north, clockwise).
Point bearing_vector(double bearing_deg);

/// Compass bearing in [0, 360) of the vector `d`; 0 for the zero vector.
double bearing_of(Point d);

/// Wraps any finite angle into [0, 360).
double normalize_bearing(double deg);

/// Absolute circular difference of two bearings, in [0, 180].
double bearing_difference(double a_deg, double b_deg);

/// Spatial footprint of one video frame: a circular sector with apex at
/// `position`, radius `r`, centered on compass bearing `theta` and spanning
/// the full lens angle `delta`.
class FoV {
public:
    /// Throws InvalidArgument unless r > 0 and 0 < delta < 180. `theta` is
    /// wrapped into [0, 360).
    FoV(Point position, double r, double theta, double delta, std::int64_t t = 0);

    Point position() const { return m_position; }
    double r() const { return m_r; }
    double theta() const { return m_theta; }
    double delta() const { return m_delta; }
    std::int64_t t() const { return m_t; }

    /// Same copy with a different position / direction. Used by the
    /// equivariance tests and synthetic generators.
    FoV moved_to(Point p) const { return FoV(p, m_r, m_theta, m_delta, m_t); }
    FoV turned_to(double theta) const { return FoV(m_position, m_r, theta, m_delta, m_t); }

    /// Equality of the geometric part (the frame index is ignored).
    bool same_region(const FoV& o) const {
        return m_position == o.m_position && m_r == o.m_r && m_theta == o.m_theta &&
               m_delta == o.m_delta;
    }

    friend bool operator==(const FoV&, const FoV&) = default;

private:
    Point m_position;
    double m_r;
    double m_theta;
    double m_delta;
    std::int64_t m_t;
};

/// Axis-aligned box, used for pruning and rasterization.
struct Box {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;

    bool overlaps(const Box& o) const {
        return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
    }
};

/// A convex region with counter-clockwise vertices, or empty.
class ConvexPolygon {
public:
    ConvexPolygon() = default;

    /// Validates the vertex list: at least three vertices, counter-clockwise and
    /// convex within kGeomTolerance. Throws InvalidArgument otherwise. An empty
    /// list yields the empty polygon.
    static ConvexPolygon from_vertices(std::vector<Point> vertices);

    std::span<const Point> vertices() const { return m_vertices; }
    std::size_t size() const { return m_vertices.size(); }
    bool empty() const { return m_vertices.empty(); }

    /// Bounding box; all zeros for the empty polygon.
    Box bounds() const;

    /// Point-in-polygon with kGeomTolerance slack on every edge.
    bool contains(Point p) const;

private:
    struct unchecked_t {};
    ConvexPolygon(unchecked_t, std::vector<Point> v) : m_vertices(std::move(v)) {}

    friend ConvexPolygon clip_convex(const ConvexPolygon&, const ConvexPolygon&);

    std::vector<Point> m_vertices;
};

/// Which polygon stands in for the exact sector.
class ApproxMethod {
public:
    enum class Kind { mbs, mbt, mbr, oracle };

    static constexpr double default_segment_angle = 5.0;
    static constexpr double oracle_segment_angle = 0.5;

    /// Inscribed fan with segments of at most `segment_angle` degrees, which
    /// must lie in (0, 45].
    static ApproxMethod mbs(double segment_angle = default_segment_angle);
    static ApproxMethod mbt() { return ApproxMethod(Kind::mbt, 0); }
    static ApproxMethod mbr() { return ApproxMethod(Kind::mbr, 0); }
    static ApproxMethod oracle() { return ApproxMethod(Kind::oracle, oracle_segment_angle); }

    Kind kind() const { return m_kind; }
    /// Segment angle for mbs / oracle, 0 otherwise.
    double segment_angle() const { return m_segment_angle; }

    friend bool operator==(const ApproxMethod&, const ApproxMethod&) = default;

private:
    ApproxMethod(Kind k, double a) : m_kind(k), m_segment_angle(a) {}

    Kind m_kind;
    double m_segment_angle;
};

/// Number of fan segments used for a lens angle: ceil(delta / segment_angle).
int fan_segments(double delta, double segment_angle);

/// True iff `p` lies within range r of the apex and within delta/2 of the
/// view direction. The apex itself is inside. Both tests carry kGeomTolerance
/// slack (meters and degrees) so points on the arc survive rounding.
bool sector_contains(const FoV& fov, Point p);

/// Exact bounding box of the sector.
Box sector_bounds(const FoV& fov);

/// Polygonal approximation of the sector.
///  - MBS: apex + (k+1) arc points, k = fan_segments; contained in the sector.
///  - MBT: apex + the two edge rays cut at r / cos(delta/2); contains the sector.
///  - MBR: axis-aligned sector_bounds; contains the sector.
///  - Oracle: MBS at 0.5 degrees.
ConvexPolygon view_polygon(const FoV& fov, ApproxMethod method);

double polygon_area(const ConvexPolygon& p);

/// Intersection of two convex polygons by clipping `subject` against each edge
/// of `clipper`. The result may be empty.
ConvexPolygon clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clipper);

/// Area of p ∩ q; results below kGeomTolerance are reported as 0.
double convex_intersection_area(const ConvexPolygon& p, const ConvexPolygon& q);

/// A FoV together with its approximated polygon, area and bounds, so that
/// repeated CVW evaluations do not rebuild the geometry.
struct ViewRegion {
    FoV fov;
    ConvexPolygon polygon;
    double area;
    Box bounds;
};

ViewRegion make_view_region(const FoV& fov, ApproxMethod method);

/// Intersection-over-union of the approximated regions, |A∩B| / (|A|+|B|-|A∩B|).
/// The arguments are put in a canonical order first, so the result is
/// bit-for-bit symmetric. Both regions must use the same method.
double cvw(const ViewRegion& a, const ViewRegion& b);
double cvw(const FoV& a, const FoV& b, ApproxMethod method);

/// Rasterized IoU of the exact sectors, used as an independent check of cvw.
///
/// Cell centers are laid on one lattice anchored at the lower-left corner of the
/// joint bounding box. Each sector is classified only over its own bounding box
/// and the overlap only over the intersection of the two boxes, so sectors whose
/// boxes are disjoint return 0 without rasterizing the gap between them. Throws
/// GridTooLarge when the cells to visit exceed `max_cells`, InvalidArgument
/// when `cell` is not positive.
double cvw_grid_oracle(const FoV& a, const FoV& b, double cell, std::int64_t max_cells = 10'000'000);

} // namespace lcvs
