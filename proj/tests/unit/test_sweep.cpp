#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <stdexcept>

#include "patchdct/error.hpp"
#include "patchdct/ingest.hpp"
#include "patchdct/io.hpp"
#include "patchdct/sweep.hpp"

using namespace patchdct;

TEST_CASE("parallel_for covers every index and rethrows") {
    for (int threads : {1, 3, 8}) {
        std::vector<int> hit(1000, 0);
        parallel_for(hit.size(), threads, [&](std::size_t i) { hit[i] += 1; });
        CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
    }
    CHECK_THROWS_AS(parallel_for(50, 4,
                                 [](std::size_t i) {
                                     if (i == 17) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("sweep rows and determinism") {
    SweepSpec spec;
    spec.seed = 11;
    spec.count = 12;
    spec.resolution = 32;
    spec.global_dims = {50, 1024};
    spec.patches = {{8, 64}, {8, 6}};
    spec.flip_probs = {0.0, 0.2};
    const auto rows = run_sweep(spec, 1);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].kind == "global");
    CHECK(rows[1].mean_iou == 1.0);
    CHECK(rows[2].kind == "patch");
    CHECK(rows[2].mean_iou == 1.0);
    CHECK(rows[2].mean_boundary_iou == 1.0);
    CHECK(rows[3].mean_iou <= rows[2].mean_iou);
    CHECK(rows[2].band == default_band_width(32));

    const auto csv = sweep_csv(rows);
    CHECK(csv == sweep_csv(run_sweep(spec, 4)));
    CHECK(csv.rfind("schema,kind,resolution,global_dim,patch_size,patch_dim,stages,flip_prob,noise,"
                    "band,count,mean_iou,mean_boundary_iou\n",
                    0) == 0);
    CHECK(csv.find("patchdct-sweep-v1,global,32,50,,,,,,1,12,") != std::string::npos);
    CHECK(csv.find("patchdct-sweep-v1,patch,32,,8,6,1,0.2,0,1,12,") != std::string::npos);
}

TEST_CASE("sweep spec validation and JSON") {
    SweepSpec empty;
    CHECK_THROWS_AS(validate(empty), InputError);
    SweepSpec bad;
    bad.resolution = 20;
    bad.patches = {{8, 6}};
    CHECK_THROWS_AS(validate(bad), ConfigError);
    SweepSpec missing;
    missing.global_dims = {10};
    missing.annotations = "/nonexistent/annotations.json";
    CHECK_THROWS_AS(validate(missing), InputError);

    const auto spec = sweep_spec_from_json(parse_json(R"({
        "corpus": {"synthetic": {"seed": 5, "count": 7}}, "resolution": 64,
        "global_dims": [100], "patches": [{"m": 8, "n": 6}, {"m": 4, "n": 3}],
        "stages": [1, 2], "flip_probs": [0, 0.1], "noises": [0.5], "band": 2})"));
    CHECK(spec.seed == 5);
    CHECK(spec.count == 7);
    CHECK(spec.resolution == 64);
    CHECK(spec.patches.size() == 2);
    CHECK(spec.patches[1].patch_dim == 3);
    CHECK(spec.stages == std::vector<int>{1, 2});
    CHECK(spec.noises == std::vector<double>{0.5});
    CHECK(*spec.band == 2);

    const auto ann = sweep_spec_from_json(
        parse_json(R"({"corpus": {"annotations": "a.json"}, "global_dims": [1]})"), "/data");
    CHECK(*ann.annotations == std::filesystem::path("/data/a.json"));
    CHECK_THROWS_AS(sweep_spec_from_json(parse_json(R"({"global_dims": [1]})")), ParseError);
    CHECK_THROWS_AS(sweep_spec_from_json(parse_json(
                        R"({"corpus": {"synthetic": {"seed": 1, "count": 2}}, "patches": [[8, 6]]})")),
                    ParseError);
}

TEST_CASE("annotation corpus") {
    const auto dir = std::filesystem::temp_directory_path() / "patchdct_sweep_test";
    std::filesystem::create_directories(dir);
    write_file(dir / "ann.json", R"({"annotations": [
        {"id": 1, "bbox": [0, 0, 10, 10], "segmentation": [[0, 0, 10, 0, 0, 10]]},
        {"id": 2, "bbox": [5, 5, 20, 10], "segmentation": [[5, 5, 25, 5, 25, 15, 5, 15]]}]})");
    SweepSpec spec;
    spec.annotations = dir / "ann.json";
    spec.resolution = 16;
    spec.global_dims = {256};
    spec.patches = {{4, 16}};
    const auto corpus = load_corpus(spec);
    REQUIRE(corpus.size() == 2);
    CHECK(corpus[1] == BinaryMask(16, 1));
    for (const auto& row : run_sweep(spec, 2)) CHECK(row.mean_iou == 1.0);

    write_file(dir / "bad.json", R"({"annotations": [{"id": 1, "bbox": [0, 0, 0, 1],
        "segmentation": [[0, 0, 1, 0, 0, 1]]}]})");
    spec.annotations = dir / "bad.json";
    CHECK_THROWS_AS(load_corpus(spec), InputError);
    std::filesystem::remove_all(dir);
}
