#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcvs/baselines.hpp"
#include "lcvs/error.hpp"
#include "support.hpp"

#include <random>

using namespace lcvs;

namespace {

// Longest chain of valid pairs (i1 < i2 < ..., j1 < j2 < ...), 1-based
// indices, searched exhaustively.
std::size_t best_chain(const GeoVideo& a, const GeoVideo& b, const LcssParams& p, std::size_t i0,
                       std::size_t j0) {
    std::size_t best = 0;
    for (std::size_t i = i0 + 1; i <= a.size(); ++i) {
        for (std::size_t j = j0 + 1; j <= b.size(); ++j) {
            const std::size_t off = i > j ? i - j : j - i;
            if (off <= p.sigma && distance(a.fovs()[i - 1].position(), b.fovs()[j - 1].position()) <= p.epsilon) {
                best = std::max(best, 1 + best_chain(a, b, p, i, j));
            }
        }
    }
    return best;
}

std::vector<Point> random_path(std::mt19937_64& rng, std::size_t n, double box) {
    std::uniform_real_distribution<double> u(0, box);
    std::vector<Point> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({u(rng), u(rng)});
    }
    return out;
}

} // namespace

TEST_CASE("lcss_score examples") {
    const std::vector<Point> pts{{0, 0}, {3, 1}, {7, 2}, {9, 9}};
    const GeoVideo a = test::video_at("a", pts, 0);
    // Same points facing the other way: LCSS does not look at directions.
    const GeoVideo b = test::video_at("b", pts, 180);
    CHECK(lcss_score(a, b, {0.5, 0}) == 4);
    CHECK(lcss_score(a, a, {1e-6, 1}) == 4);

    std::vector<Point> shifted;
    for (Point p : pts) {
        shifted.push_back(p + Point{100, 0});
    }
    CHECK(lcss_score(a, test::video_at("s", shifted), {1, 1}) == 0);
    CHECK(lcss_score(a, GeoVideo("e", {}), {1, 1}) == 0);
    CHECK_THROWS_AS(lcss_score(a, a, {0, 1}), InvalidArgument);
}

TEST_CASE("lcss_distance examples") {
    const GeoVideo a = test::video_at("a", {{0, 0}, {10, 0}});
    const GeoVideo half = test::video_at("h", {{0, 0}, {500, 0}});
    const GeoVideo none = test::video_at("n", {{900, 0}, {500, 0}});
    const LcssParams p{1, 1};
    CHECK(lcss_distance(a, a, p) == 0);
    CHECK(lcss_distance(a, none, p) == 1);
    CHECK(lcss_distance(a, half, p) == 0.5);
    CHECK(lcss_distance(a, GeoVideo("e", {}), p) == 1);
}

TEST_CASE("lcss_score equals the exhaustive chain search") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<std::size_t> len(1, 8);
    // 3x3 instance first, as a fixed small case
    {
        const GeoVideo a = test::video_at("a", random_path(rng, 3, 20));
        const GeoVideo b = test::video_at("b", random_path(rng, 3, 20));
        const LcssParams p{10, 1};
        CHECK(lcss_score(a, b, p) == best_chain(a, b, p, 0, 0));
    }
    for (int trial = 0; trial < 150; ++trial) {
        const GeoVideo a = test::video_at("a", random_path(rng, len(rng), 30));
        const GeoVideo b = test::video_at("b", random_path(rng, len(rng), 30));
        const LcssParams p{8, static_cast<unsigned>(trial % 4)};
        const std::size_t s = lcss_score(a, b, p);
        CHECK(s == best_chain(a, b, p, 0, 0));
        CHECK(s <= std::min(a.size(), b.size()));
    }
}

TEST_CASE("lcss is invariant under rigid translation") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> shift(-1000, 1000);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pa = random_path(rng, 7, 40);
        const auto pb = random_path(rng, 7, 40);
        const Point t{shift(rng), shift(rng)};
        std::vector<Point> ta, tb;
        for (Point p : pa) {
            ta.push_back(p + t);
        }
        for (Point p : pb) {
            tb.push_back(p + t);
        }
        const LcssParams p{12, 1};
        CHECK(lcss_score(test::video_at("a", pa), test::video_at("b", pb), p) ==
              lcss_score(test::video_at("a", ta), test::video_at("b", tb), p));
    }
}

TEST_CASE("hausdorff_distance") {
    CHECK(hausdorff_distance(test::video_at("a", {{0, 0}}), test::video_at("b", {{3, 4}})) == 5);
    CHECK(hausdorff_distance(test::video_at("a", {{0, 0}, {10, 0}}), test::video_at("b", {{0, 0}})) == 10);
    CHECK(hausdorff_distance(test::video_at("b", {{0, 0}}), test::video_at("a", {{0, 0}, {10, 0}})) == 10);
    // set semantics: order and multiplicity do not matter
    CHECK(hausdorff_distance(test::video_at("a", {{1, 1}, {2, 2}, {1, 1}}), test::video_at("b", {{2, 2}, {1, 1}})) == 0);
    CHECK_THROWS_AS(hausdorff_distance(GeoVideo("e", {}), test::video_at("a", {{0, 0}})), EmptyInput);

    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        const GeoVideo a = test::video_at("a", random_path(rng, 6, 50));
        const GeoVideo b = test::video_at("b", random_path(rng, 4, 50));
        const double ab = hausdorff_distance(a, b);
        CHECK(ab == hausdorff_distance(b, a));
        CHECK(ab > 0);
        CHECK(hausdorff_distance(a, a) == 0);
    }
}
