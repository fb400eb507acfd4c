#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "patchdct/error.hpp"
#include "patchdct/ingest.hpp"
#include "patchdct/mask_codec.hpp"
#include "patchdct/patch_codec.hpp"

using namespace patchdct;

namespace {

// Uncompressed RLE (column-major, starting with background) of an
// axis-aligned box inside an image.
RleSegmentation box_rle(int height, int width, int x0, int y0, int w, int h) {
    std::vector<std::uint8_t> bits;
    for (int c = 0; c < width; ++c)
        for (int r = 0; r < height; ++r)
            bits.push_back(c >= x0 && c < x0 + w && r >= y0 && r < y0 + h);
    RleSegmentation rle{height, width, {}};
    std::uint8_t cur = 0;
    std::uint64_t run = 0;
    for (auto b : bits) {
        if (b != cur) {
            rle.counts.push_back(run);
            run = 0;
            cur = b;
        }
        ++run;
    }
    rle.counts.push_back(run);
    return rle;
}

}  // namespace

TEST_CASE("parse_annotations") {
    const auto one = parse_annotations(R"({"images": [], "annotations": [
        {"id": 7, "category_id": 3, "bbox": [1, 2, 10, 20], "area": 5,
         "segmentation": [[1, 2, 11, 2, 11, 22, 1, 22]]}]})");
    REQUIRE(one.records.size() == 1);
    CHECK(one.errors.empty());
    CHECK(one.records[0].id == 7);
    CHECK(one.records[0].category_id == 3);
    CHECK(one.records[0].bbox == BoundingBox{1, 2, 10, 20});

    CHECK(parse_annotations(R"({"annotations": []})").records.empty());

    const auto mixed = parse_annotations(R"({"annotations": [
        {"id": 1, "bbox": [0, 0, 2, 2], "segmentation": {"counts": [1, 2, 3], "size": [2, 2]}},
        {"id": 2, "bbox": [0, 0, 2, 2], "segmentation": {"counts": [1, 2, 1], "size": [2, 2]}},
        {"id": 3, "bbox": [0, 0, 0, 2], "segmentation": [[0, 0, 1, 0, 1, 1]]},
        {"id": 4, "bbox": [0, 0, 2, 2], "segmentation": [[0, 0, 1, 0]]},
        {"id": 5, "bbox": [0, 0, 2, 2], "segmentation": {"counts": "abc", "size": [2, 2]}},
        {"bbox": [0, 0, 2, 2], "segmentation": [[0, 0, 1, 0, 1, 1]]}]})");
    REQUIRE(mixed.records.size() == 1);
    CHECK(mixed.records[0].id == 2);
    REQUIRE(mixed.errors.size() == 5);
    CHECK(mixed.errors[0].index == 0);
    CHECK(mixed.errors[0].message.find("sum") != std::string::npos);
    CHECK(mixed.errors[3].message.find("compressed") != std::string::npos);

    CHECK_THROWS_AS(parse_annotations(R"({"annotations": [)"), ParseError);
    CHECK_THROWS_AS(parse_annotations(R"({"images": []})"), ParseError);
    CHECK_THROWS_AS(parse_annotations("[]"), ParseError);
    try {
        parse_annotations("{\"annotations\": [1,, 2]}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("serialize then parse is the identity") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> coord(0, 500);
    std::vector<InstanceRecord> recs;
    for (int i = 0; i < 20; ++i) {
        InstanceRecord r;
        r.id = i * 13 + 1;
        r.category_id = i % 4;
        r.bbox = {coord(rng), coord(rng), 1 + coord(rng), 1 + coord(rng)};
        if (i % 3 == 0) {
            r.segmentation = box_rle(9, 11, i % 5, 1, 3, 4);
        } else {
            PolygonSegmentation p;
            for (int k = 0; k < 1 + i % 2; ++k) {
                std::vector<double> poly;
                for (int v = 0; v < 2 * (3 + i % 4); ++v) poly.push_back(coord(rng));
                p.polygons.push_back(poly);
            }
            r.segmentation = p;
        }
        recs.push_back(r);
    }
    const auto parsed = parse_annotations(serialize_annotations(recs));
    CHECK(parsed.errors.empty());
    CHECK(parsed.records == recs);
}

TEST_CASE("rasterize") {
    InstanceRecord rect{1, 1, {10.5, 20.25, 30, 17}, PolygonSegmentation{{{10.5, 20.25, 40.5, 20.25, 40.5, 37.25, 10.5, 37.25}}}};
    for (int k : {1, 8, 28, 112}) CHECK(rasterize(rect, k) == BinaryMask(k, 1));

    InstanceRecord tri{2, 1, {0, 0, 50, 80}, PolygonSegmentation{{{0, 0, 50, 0, 0, 80}}}};
    const auto t = rasterize(tri, 112);
    CHECK(std::abs(t.foreground_fraction() - 0.5) <= 2.0 / 112);
    CHECK(rasterize(tri, 112) == t);

    InstanceRecord rle{3, 1, {2, 3, 4, 5}, box_rle(10, 12, 2, 3, 4, 5)};
    for (int k : {1, 4, 5, 64}) CHECK(rasterize(rle, k) == BinaryMask(k, 1));

    InstanceRecord bad = rect;
    bad.bbox.width = 0;
    CHECK_THROWS_AS(rasterize(bad, 8), InputError);
    CHECK_THROWS_AS(rasterize(rect, 0), InputError);
}

TEST_CASE("resize_mask") {
    std::mt19937_64 rng(2);
    const auto m = oracle::random_mask(rng, 13);
    CHECK(resize_mask(m, 13) == m);
    for (auto [a, b] : {std::pair{7, 3}, {3, 7}, {112, 128}, {128, 112}, {5, 1}})
        CHECK(resize_mask(BinaryMask(a, 1), b) == BinaryMask(b, 1));
    CHECK(resize_mask(BinaryMask(2, {1, 0, 0, 1}), 1) == BinaryMask(1, 0));
    CHECK(resize_mask(BinaryMask(2, {1, 1, 0, 1}), 1) == BinaryMask(1, 1));
    // 2x upsampling replicates pixels exactly.
    const auto up = resize_mask(m, 26);
    for (int r = 0; r < 26; ++r)
        for (int c = 0; c < 26; ++c) REQUIRE(up(r, c) == m(r / 2, c / 2));
    CHECK(resize_mask(up, 13) == m);

    for (const auto& mask : synth_corpus(1, 30, 56)) {
        const double f0 = mask.foreground_fraction();
        const double f1 = resize_mask(resize_mask(mask, 112), 56).foreground_fraction();
        CHECK(std::abs(f0 - f1) <= 1.0 / 56);
    }
}

TEST_CASE("synth_corpus") {
    const auto a = synth_corpus(123, 100, 112);
    const auto b = synth_corpus(123, 100, 112);
    CHECK(a == b);
    CHECK(a.size() == 100);
    CHECK(synth_corpus(124, 3, 112) != synth_corpus(123, 3, 112));
    CHECK(synth_mask(123, 57, 112) == a[57]);
    for (const auto& m : a) {
        CHECK(m.foreground_fraction() >= 0.05);
        CHECK(m.foreground_fraction() <= 0.95);
        const auto patches = partition(m, 8);
        CHECK(std::any_of(patches.begin(), patches.end(),
                          [](const auto& p) { return classify_patch(p) == PatchClass::Mixed; }));
        CHECK(decode_mask(encode_mask(m, 112 * 112)) == m);
    }
    CHECK_THROWS_AS(synth_corpus(1, 0, 112), InputError);
}

TEST_CASE("mask digest") {
    CHECK(mask_digest(BinaryMask(4)) == mask_digest(BinaryMask(4)));
    CHECK(mask_digest(BinaryMask(4)) != mask_digest(BinaryMask(4, 1)));
    CHECK(mask_digest(BinaryMask(4)) != mask_digest(BinaryMask(2)));
    CHECK(mask_digest(BinaryMask(4)).size() == 16);
}
