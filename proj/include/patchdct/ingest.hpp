#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "patchdct/matrix.hpp"

namespace patchdct {

struct BoundingBox {
    double x = 0.0;
    double y = 0.0;
    double width = 0.0;
    double height = 0.0;

    bool operator==(const BoundingBox&) const = default;
};

/// Polygons as flat x0,y0,x1,y1,... sequences in image coordinates.
struct PolygonSegmentation {
    std::vector<std::vector<double>> polygons;

    bool operator==(const PolygonSegmentation&) const = default;
};

/// Uncompressed COCO RLE: alternating background/foreground run lengths in
/// column-major order over an image of height x width, starting with
/// background.
struct RleSegmentation {
    int height = 0;
    int width = 0;
    std::vector<std::uint64_t> counts;

    bool operator==(const RleSegmentation&) const = default;
};

struct InstanceRecord {
    std::int64_t id = 0;
    std::int64_t category_id = 0;
    BoundingBox bbox;
    std::variant<PolygonSegmentation, RleSegmentation> segmentation;

    bool operator==(const InstanceRecord&) const = default;
};

struct RecordError {
    std::size_t index = 0;  // position inside the "annotations" array
    std::string message;
};

struct AnnotationSet {
    std::vector<InstanceRecord> records;
    std::vector<RecordError> errors;
};

/// Throws InputError if the record breaks an invariant.
void validate(const InstanceRecord& rec);

/// Parses a COCO-style document. Malformed JSON or a missing "annotations"
/// array throws ParseError; bad records are reported in errors and skipped.
AnnotationSet parse_annotations(std::string_view text);

/// {"annotations": [...]} with the fields parse_annotations reads.
std::string serialize_annotations(const std::vector<InstanceRecord>& records);

/// Crop the segmentation to its box and sample it at the centers of a
/// K x K grid. Polygons use the even-odd rule; RLE samples the image pixel
/// containing each center. Throws InputError for an invalid record or K < 1.
BinaryMask rasterize(const InstanceRecord& rec, int size);

/// Area-average resampling followed by the strict > 0.5 threshold. Exact
/// (integer area sums).
BinaryMask resize_mask(const BinaryMask& mask, int target);

/// Seeded smooth-blob masks: unions of 1-4 ellipses, sometimes with an
/// elliptical hole. Each mask has foreground fraction in [0.05, 0.95] and
/// contains both labels inside at least one 8 x 8 patch when 8 divides K.
std::vector<BinaryMask> synth_corpus(std::uint64_t seed, int count, int size);

/// One mask of synth_corpus, generated independently of the others.
BinaryMask synth_mask(std::uint64_t seed, std::uint64_t index, int size);

/// 64-bit FNV-1a over the size and pixels, as 16 hex digits.
std::string mask_digest(const BinaryMask& mask);

}  // namespace patchdct
