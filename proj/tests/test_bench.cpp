#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcvs/bench.hpp"
#include "lcvs/error.hpp"
#include "support.hpp"

#include <random>
#include <set>

using namespace lcvs;

namespace {

DistanceMatrix make_matrix(std::vector<std::string> ids, std::vector<double> values) {
    DistanceMatrix m;
    m.ids = std::move(ids);
    m.values = std::move(values);
    return m;
}

// Neighbor set of q by counting, for each candidate, how many others rank
// ahead of it; in the top k iff fewer than k do.
std::set<std::string> topk_by_rank(const DistanceMatrix& m, std::size_t q, std::size_t k) {
    std::set<std::string> out;
    const std::size_t n = m.size();
    for (std::size_t c = 0; c < n; ++c) {
        if (c == q) {
            continue;
        }
        std::size_t ahead = 0;
        for (std::size_t o = 0; o < n; ++o) {
            if (o == q || o == c) {
                continue;
            }
            const double dc = m.at(q, c);
            const double dq = m.at(q, o);
            if (dq < dc || (dq == dc && m.ids[o] < m.ids[c])) {
                ++ahead;
            }
        }
        if (ahead < k) {
            out.insert(m.ids[c]);
        }
    }
    return out;
}

std::vector<GeoVideo> small_dataset(DirectionMode mode, std::size_t n = 8) {
    SynthConfig cfg;
    cfg.n_videos = n;
    cfg.frames_per_video = 10;
    cfg.extent = 80;
    cfg.direction_mode = mode;
    cfg.seed = 5;
    return synthesize(cfg);
}

} // namespace

TEST_CASE("MethodSpec parsing") {
    CHECK(MethodSpec::parse("lcvs-mbs", 3).approx()->segment_angle() == 3);
    CHECK(MethodSpec::parse("lcvs-mbt").approx()->kind() == ApproxMethod::Kind::mbt);
    CHECK(MethodSpec::parse("lcvs-mbr").name() == "lcvs-mbr");
    CHECK(MethodSpec::parse("lcvs-oracle").approx()->segment_angle() == 0.5);
    CHECK(MethodSpec::parse("lcss", 5, 7.5, 2).epsilon() == 7.5);
    CHECK(MethodSpec::parse("lcss", 5, 7.5, 2).sigma() == 2);
    CHECK_FALSE(MethodSpec::parse("hausdorff").normalized());
    CHECK_THROWS_AS(MethodSpec::parse("dtw"), InvalidArgument);
    CHECK_THROWS_AS(MethodSpec::parse("lcss", 5, 0), InvalidArgument);
    CHECK_THROWS_AS(MethodSpec::parse("lcvs-mbs", 90), InvalidArgument);
}

TEST_CASE("distance_matrix") {
    const auto vids = small_dataset(DirectionMode::random);

    SUBCASE("identical videos give an all-zero matrix") {
        std::vector<GeoVideo> same;
        for (int i = 0; i < 4; ++i) {
            same.emplace_back("c" + std::to_string(i),
                              std::vector<FoV>(vids[0].fovs().begin(), vids[0].fovs().end()));
        }
        for (const char* name : {"lcvs-mbs", "lcvs-mbt", "lcss", "hausdorff"}) {
            const auto m = distance_matrix(same, MethodSpec::parse(name), 2);
            for (double v : m.values) {
                CHECK(v == 0);
            }
        }
    }
    SUBCASE("two videos, one mirrored pair") {
        const std::vector<GeoVideo> two{vids[0], vids[1]};
        const auto spec = MethodSpec::parse("lcvs-mbs");
        const auto m = distance_matrix(two, spec, 4);
        CHECK(m.ids == std::vector<std::string>{"v000", "v001"});
        CHECK(m.at(0, 1) == m.at(1, 0));
        CHECK(m.at(0, 1) == lcvs_distance(vids[0], vids[1], LcvsParams{1, ApproxMethod::mbs()}));
        CHECK(m.at(0, 0) == 0);
    }
    SUBCASE("thread count does not change a single bit") {
        for (const char* name : {"lcvs-mbs", "lcvs-mbr", "lcvs-oracle", "lcss", "hausdorff"}) {
            const auto spec = MethodSpec::parse(name);
            const auto one = distance_matrix(vids, spec, 1);
            CHECK(one.values == distance_matrix(vids, spec, 8).values);
            CHECK(one.values == distance_matrix(vids, spec, 0).values);
            CHECK(matrix_to_csv(one) == matrix_to_csv(distance_matrix(vids, spec, 3)));
            for (std::size_t i = 0; i < one.size(); ++i) {
                CHECK(one.at(i, i) == 0);
                for (std::size_t j = 0; j < one.size(); ++j) {
                    CHECK(one.at(i, j) == one.at(j, i));
                }
            }
        }
    }
    SUBCASE("contract errors") {
        CHECK_THROWS_AS(distance_matrix(std::vector<GeoVideo>{vids[0]}, MethodSpec::hausdorff()),
                        InvalidArgument);
        CHECK_THROWS_AS(distance_matrix(std::vector<GeoVideo>{vids[0], vids[0]}, MethodSpec::hausdorff()),
                        InvalidArgument);
        const std::vector<GeoVideo> with_empty{vids[0], GeoVideo("e", {}), vids[1]};
        CHECK_THROWS_AS(distance_matrix(with_empty, MethodSpec::hausdorff(), 3), EmptyInput);
        const auto m = distance_matrix(with_empty, MethodSpec::parse("lcss"), 3);
        CHECK(m.at(1, 1) == 1.0);
    }
}

TEST_CASE("knn") {
    SUBCASE("duplicate of the query is nearest") {
        const auto vids = small_dataset(DirectionMode::straight, 3);
        std::vector<GeoVideo> set{vids[0], vids[1],
                                  GeoVideo("dup", {vids[0].fovs().begin(), vids[0].fovs().end()})};
        const auto m = distance_matrix(set, MethodSpec::parse("lcvs-mbs"));
        CHECK(knn(m, "v000", 1) == std::vector<std::string>{"dup"});
    }
    SUBCASE("ties go to the smaller id") {
        const auto m = make_matrix({"d", "b", "a", "c"}, std::vector<double>(16, 0.5));
        CHECK(knn(m, "d", 2) == std::vector<std::string>{"a", "b"});
        CHECK(knn(m, "a", 3) == std::vector<std::string>{"b", "c", "d"});
    }
    SUBCASE("k = n - 1 returns everyone else sorted") {
        const auto m = make_matrix({"a", "b", "c"}, {0, 0.9, 0.1, 0.9, 0, 0.3, 0.1, 0.3, 0});
        CHECK(knn(m, "a", 2) == std::vector<std::string>{"c", "b"});
        CHECK_THROWS_AS(knn(m, "a", 3), InvalidArgument);
        CHECK_THROWS_AS(knn(m, "zz", 1), UnknownId);
    }
}

TEST_CASE("accuracy_eval") {
    const auto vids = small_dataset(DirectionMode::random, 10);
    const auto oracle = distance_matrix(vids, MethodSpec::parse("lcvs-oracle"), 4);

    CHECK(accuracy_eval(oracle, oracle, 3) == 1.0);

    SUBCASE("reversed ranking shares nothing") {
        // Four videos on a line, |i - j| apart. Flipping the distances turns
        // each query's nearest neighbor into its farthest.
        const auto line = make_matrix({"a", "b", "c", "d"},
                                      {0, 1, 2, 3, 1, 0, 1, 2, 2, 1, 0, 1, 3, 2, 1, 0});
        DistanceMatrix flipped = line;
        for (auto& v : flipped.values) {
            v = v == 0 ? 0 : 4 - v;
        }
        // nearest under line: a->b, b->a, c->b, d->c; under flipped: a->d, b->d, c->a, d->a
        CHECK(accuracy_eval(flipped, line, 1) == 0.0);
    }
    SUBCASE("matches precision@3 counted by hand") {
        const auto method = distance_matrix(vids, MethodSpec::parse("lcss"), 2);
        double total = 0;
        for (std::size_t q = 0; q < vids.size(); ++q) {
            const auto a = topk_by_rank(method, q, 3);
            const auto b = topk_by_rank(oracle, q, 3);
            std::size_t common = 0;
            for (const auto& id : a) {
                common += b.count(id);
            }
            total += static_cast<double>(common) / 3.0;
        }
        CHECK(accuracy_eval(method, oracle, 3) == doctest::Approx(total / 10.0).epsilon(1e-15));
    }
    SUBCASE("id sets must agree") {
        DistanceMatrix other = oracle;
        other.ids.back() = "stranger";
        CHECK_THROWS_AS(accuracy_eval(other, oracle, 3), IdMismatch);
    }
}

TEST_CASE("matrix CSV") {
    const auto vids = small_dataset(DirectionMode::random, 4);
    const auto m = distance_matrix(vids, MethodSpec::parse("lcvs-mbt"));
    const std::string csv = matrix_to_csv(m);
    CHECK(csv.rfind("id,v000,v001,v002,v003\nv000,0,", 0) == 0);
    const auto back = matrix_from_csv(csv);
    CHECK(back.ids == m.ids);
    CHECK(back.values == m.values);
    CHECK_THROWS_AS(matrix_from_csv("x,a\na,0\n"), ParseError);
    CHECK_THROWS_AS(matrix_from_csv("id,a,b\na,0,1\n"), ParseError);
}

TEST_CASE("experiments") {
    SynthConfig base;
    base.frames_per_video = 10;
    base.extent = 120;
    ExperimentOptions opts;
    opts.methods = default_methods();
    opts.k = 3;
    opts.threads = 4;

    SUBCASE("fov-count sweep shape") {
        const std::vector<double> levels{60, 100};
        const auto rep = run_experiment_fov_count(base, levels, opts);
        CHECK(rep.rows.size() == 16);
        for (const auto& row : rep.rows) {
            CHECK(row.accuracy >= 0);
            CHECK(row.accuracy <= 1);
            CHECK(row.wall_time_s > 0);
            CHECK(row.frames_per_video == 10);
            CHECK(row.n_videos == static_cast<std::size_t>(row.sweep_value / 10));
            CHECK(row.seed == base.seed);
        }
        CHECK(rep.rows.front().sweep_value == 60);
        CHECK(rep.rows.front().method == "lcss");
        CHECK(rep.rows.front().mode == DirectionMode::random);
        ExperimentReport sorted = rep;
        sorted.sort_rows();
        CHECK(sorted == rep);
    }
    SUBCASE("oracle rows score 1") {
        opts.methods.push_back(MethodSpec::parse("lcvs-oracle"));
        const std::vector<double> levels{10, 40};
        const auto rep = run_experiment_view_distance(base, levels, opts);
        CHECK(rep.rows.size() == 2 * 5 * 2);
        for (double lv : levels) {
            for (auto mode : {DirectionMode::straight, DirectionMode::random}) {
                const auto* row = rep.find(lv, "lcvs-oracle", mode);
                REQUIRE(row != nullptr);
                CHECK(row->accuracy == 1.0);
            }
        }
    }
    SUBCASE("argument checks") {
        const std::vector<double> one{100};
        CHECK_THROWS_AS(run_experiment_fov_count(base, one, opts), InvalidArgument);
        const std::vector<double> tiny{20, 30}; // 2 and 3 videos, not more than k
        CHECK_THROWS_AS(run_experiment_fov_count(base, tiny, opts), InvalidArgument);
    }
}

TEST_CASE("report files") {
    const auto dir = test::scratch_dir("report");
    const std::string header = "sweep_value,method,mode,accuracy,wall_time_s,n_videos,frames_per_video,seed\n";

    ExperimentReport empty;
    emit_report(empty, dir / "empty.csv", ReportFormat::csv);
    CHECK(read_file(dir / "empty.csv") == header);

    ExperimentReport rep;
    rep.rows.push_back({250, "lcss", DirectionMode::random, 0.4, 0.0125, 10, 25, 42});
    rep.rows.push_back({250, "lcvs-mbs", DirectionMode::straight, 1.0, 0.1, 10, 25, 42});
    CHECK(report_to_csv(rep) ==
          header + "250,lcss,random,0.4,0.0125,10,25,42\n250,lcvs-mbs,straight,1,0.1,10,25,42\n");

    emit_report(rep, dir / "r.json", ReportFormat::json);
    CHECK(report_from_json(read_file(dir / "r.json")) == rep);
    CHECK_THROWS_AS(report_from_json("{"), ParseError);
    CHECK_THROWS_AS(report_from_json("{\"rows\":[{\"method\":1}]}"), SchemaError);
    CHECK_THROWS_AS(emit_report(rep, dir / "no" / "such" / "dir.csv", ReportFormat::csv), IoError);
}
