#include "patchdct/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

#include <json.hpp>

#include "patchdct/error.hpp"
#include "patchdct/patch_codec.hpp"
#include "patchdct/rng.hpp"

namespace patchdct {
namespace {

using nlohmann::json;

BoundingBox parse_bbox(const json& j) {
    if (!j.is_array() || j.size() != 4)
        throw InputError("bbox must be an array of four numbers");
    for (const auto& v : j)
        if (!v.is_number()) throw InputError("bbox must be an array of four numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

PolygonSegmentation parse_polygons(const json& j) {
    PolygonSegmentation seg;
    for (const auto& poly : j) {
        if (!poly.is_array()) throw InputError("polygon must be an array of coordinates");
        std::vector<double> coords;
        coords.reserve(poly.size());
        for (const auto& v : poly) {
            if (!v.is_number()) throw InputError("polygon coordinates must be numbers");
            coords.push_back(v.get<double>());
        }
        seg.polygons.push_back(std::move(coords));
    }
    return seg;
}

RleSegmentation parse_rle(const json& j) {
    const auto counts = j.find("counts");
    const auto size = j.find("size");
    if (counts == j.end() || size == j.end()) throw InputError("RLE needs 'counts' and 'size'");
    if (counts->is_string())
        throw InputError("compressed RLE strings are not supported; use uncompressed counts");
    if (!counts->is_array()) throw InputError("RLE counts must be an array");
    if (!size->is_array() || size->size() != 2 || !(*size)[0].is_number_integer() ||
        !(*size)[1].is_number_integer())
        throw InputError("RLE size must be [height, width]");
    RleSegmentation rle;
    rle.height = (*size)[0].get<int>();
    rle.width = (*size)[1].get<int>();
    for (const auto& c : *counts) {
        if (!c.is_number_unsigned() && !(c.is_number_integer() && c.get<std::int64_t>() >= 0))
            throw InputError("RLE counts must be non-negative integers");
        rle.counts.push_back(c.get<std::uint64_t>());
    }
    return rle;
}

std::int64_t integer_field(const json& rec, const char* name, bool required) {
    const auto it = rec.find(name);
    if (it == rec.end()) {
        if (required) throw InputError(std::string("missing '") + name + "'");
        return 0;
    }
    if (!it->is_number_integer()) throw InputError(std::string("'") + name + "' must be an integer");
    return it->get<std::int64_t>();
}

InstanceRecord parse_record(const json& rec) {
    if (!rec.is_object()) throw InputError("annotation must be an object");
    InstanceRecord out;
    out.id = integer_field(rec, "id", true);
    out.category_id = integer_field(rec, "category_id", false);
    const auto bbox = rec.find("bbox");
    if (bbox == rec.end()) throw InputError("missing 'bbox'");
    out.bbox = parse_bbox(*bbox);
    const auto seg = rec.find("segmentation");
    if (seg == rec.end()) throw InputError("missing 'segmentation'");
    if (seg->is_array()) out.segmentation = parse_polygons(*seg);
    else if (seg->is_object()) out.segmentation = parse_rle(*seg);
    else throw InputError("segmentation must be a polygon list or an RLE object");
    validate(out);
    return out;
}

// Even-odd crossing test against one closed polygon.
bool inside_polygon(const std::vector<double>& poly, double px, double py) {
    const std::size_t n = poly.size() / 2;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const double xi = poly[2 * i], yi = poly[2 * i + 1];
        const double xj = poly[2 * j], yj = poly[2 * j + 1];
        if ((yi > py) != (yj > py) && px < (xj - xi) * (py - yi) / (yj - yi) + xi)
            inside = !inside;
    }
    return inside;
}

// Column-major image bitmap of an uncompressed RLE.
std::vector<std::uint8_t> decode_rle(const RleSegmentation& rle) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(rle.height) * rle.width, 0);
    std::size_t pos = 0;
    std::uint8_t value = 0;
    for (auto run : rle.counts) {
        std::fill_n(bits.begin() + static_cast<std::ptrdiff_t>(pos), run, value);
        pos += run;
        value ^= 1;
    }
    return bits;
}

struct Ellipse {
    double cx, cy, ax, ay, angle;

    bool contains(double x, double y) const {
        const double dx = x - cx, dy = y - cy;
        const double c = std::cos(angle), s = std::sin(angle);
        const double u = (c * dx + s * dy) / ax;
        const double v = (-s * dx + c * dy) / ay;
        return u * u + v * v <= 1.0;
    }
};

bool has_mixed_patch(const BinaryMask& mask) {
    constexpr int patch = kDefaultPatchSize;
    if (mask.size() % patch != 0) {
        const auto ones = mask.count();
        return ones > 0 && ones < mask.values().size();
    }
    const auto patches = partition(mask, patch);
    return std::any_of(patches.begin(), patches.end(),
                       [](const auto& p) { return classify_patch(p) == PatchClass::Mixed; });
}

}  // namespace

void validate(const InstanceRecord& rec) {
    const auto& b = rec.bbox;
    if (!std::isfinite(b.x) || !std::isfinite(b.y) || !std::isfinite(b.width) ||
        !std::isfinite(b.height) || b.width <= 0.0 || b.height <= 0.0)
        throw InputError("bounding box must have positive finite extent");
    if (const auto* poly = std::get_if<PolygonSegmentation>(&rec.segmentation)) {
        if (poly->polygons.empty()) throw InputError("polygon segmentation is empty");
        for (const auto& p : poly->polygons) {
            if (p.size() % 2 != 0) throw InputError("polygon has an odd number of coordinates");
            if (p.size() < 6) throw InputError("polygon needs at least 3 points");
            if (!std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); }))
                throw InputError("polygon coordinates must be finite");
        }
    } else {
        const auto& rle = std::get<RleSegmentation>(rec.segmentation);
        if (rle.height < 1 || rle.width < 1) throw InputError("RLE size must be positive");
        const std::uint64_t total = std::accumulate(rle.counts.begin(), rle.counts.end(),
                                                    std::uint64_t{0});
        const auto expected = static_cast<std::uint64_t>(rle.height) * rle.width;
        if (total != expected)
            throw InputError("RLE counts sum to " + std::to_string(total) + ", expected " +
                             std::to_string(expected));
    }
}

AnnotationSet parse_annotations(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("malformed annotation document at byte " + std::to_string(e.byte) + ": " +
                         e.what());
    }
    if (!doc.is_object()) throw ParseError("annotation document must be a JSON object");
    const auto anns = doc.find("annotations");
    if (anns == doc.end() || !anns->is_array())
        throw ParseError("annotation document has no 'annotations' array");

    AnnotationSet out;
    for (std::size_t i = 0; i < anns->size(); ++i) {
        try {
            out.records.push_back(parse_record((*anns)[i]));
        } catch (const InputError& e) {
            out.errors.push_back({i, e.what()});
        } catch (const json::exception& e) {
            out.errors.push_back({i, e.what()});
        }
    }
    return out;
}

std::string serialize_annotations(const std::vector<InstanceRecord>& records) {
    json anns = json::array();
    for (const auto& rec : records) {
        json j;
        j["id"] = rec.id;
        j["category_id"] = rec.category_id;
        j["bbox"] = {rec.bbox.x, rec.bbox.y, rec.bbox.width, rec.bbox.height};
        if (const auto* poly = std::get_if<PolygonSegmentation>(&rec.segmentation)) {
            j["segmentation"] = poly->polygons;
        } else {
            const auto& rle = std::get<RleSegmentation>(rec.segmentation);
            j["segmentation"] = {{"counts", rle.counts}, {"size", {rle.height, rle.width}}};
        }
        anns.push_back(std::move(j));
    }
    return json{{"annotations", std::move(anns)}}.dump();
}

BinaryMask rasterize(const InstanceRecord& rec, int size) {
    if (size < 1) throw InputError("raster size must be positive");
    validate(rec);
    const auto& b = rec.bbox;
    BinaryMask out(size);
    auto sample_x = [&](int col) { return b.x + (col + 0.5) * b.width / size; };
    auto sample_y = [&](int row) { return b.y + (row + 0.5) * b.height / size; };

    if (const auto* poly = std::get_if<PolygonSegmentation>(&rec.segmentation)) {
        for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c) {
                const double x = sample_x(c), y = sample_y(r);
                // Polygons of one instance are unioned.
                const bool on = std::any_of(poly->polygons.begin(), poly->polygons.end(),
                                            [&](const auto& p) { return inside_polygon(p, x, y); });
                out.set(r, c, on);
            }
        return out;
    }

    const auto& rle = std::get<RleSegmentation>(rec.segmentation);
    const auto bits = decode_rle(rle);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            const double px = std::floor(sample_x(c));
            const double py = std::floor(sample_y(r));
            if (px < 0 || py < 0 || px >= rle.width || py >= rle.height) continue;
            const auto idx = static_cast<std::size_t>(px) * rle.height + static_cast<std::size_t>(py);
            out.set(r, c, bits[idx] != 0);
        }
    return out;
}

BinaryMask resize_mask(const BinaryMask& mask, int target) {
    const int src = mask.size();
    if (src < 1 || target < 1) throw InputError("mask sizes must be positive");
    if (src == target) return mask;

    // In units of 1/(src*target): source pixel p spans [p*target, (p+1)*target),
    // target pixel i spans [i*src, (i+1)*src).
    struct Span {
        int first;
        std::vector<std::int64_t> weights;
    };
    std::vector<Span> spans(target);
    for (int i = 0; i < target; ++i) {
        const std::int64_t lo = static_cast<std::int64_t>(i) * src;
        const std::int64_t hi = lo + src;
        const int first = static_cast<int>(lo / target);
        spans[i].first = first;
        for (int p = first; p < src && static_cast<std::int64_t>(p) * target < hi; ++p) {
            const std::int64_t a = std::max(lo, static_cast<std::int64_t>(p) * target);
            const std::int64_t b = std::min(hi, static_cast<std::int64_t>(p + 1) * target);
            spans[i].weights.push_back(b - a);
        }
    }
    const std::int64_t area = static_cast<std::int64_t>(src) * src;
    BinaryMask out(target);
    for (int i = 0; i < target; ++i)
        for (int j = 0; j < target; ++j) {
            std::int64_t sum = 0;
            const auto& rs = spans[i];
            const auto& cs = spans[j];
            for (std::size_t a = 0; a < rs.weights.size(); ++a)
                for (std::size_t b = 0; b < cs.weights.size(); ++b)
                    if (mask(rs.first + static_cast<int>(a), cs.first + static_cast<int>(b)))
                        sum += rs.weights[a] * cs.weights[b];
            out.set(i, j, 2 * sum > area);
        }
    return out;
}

BinaryMask synth_mask(std::uint64_t seed, std::uint64_t index, int size) {
    if (size < 2) throw InputError("synthetic masks need size >= 2");
    Rng rng = Rng::for_instance(seed, index);
    const double k = size;
    for (;;) {
        std::vector<Ellipse> blobs(1 + rng.below(4));
        for (auto& e : blobs)
            e = {rng.uniform(0.2 * k, 0.8 * k), rng.uniform(0.2 * k, 0.8 * k),
                 rng.uniform(0.04 * k, 0.25 * k), rng.uniform(0.04 * k, 0.25 * k),
                 rng.uniform(0.0, std::numbers::pi)};
        std::optional<Ellipse> hole;
        if (rng.bernoulli(0.3)) {
            const auto& host = blobs[rng.below(blobs.size())];
            hole = Ellipse{host.cx + rng.uniform(-0.3, 0.3) * host.ax,
                           host.cy + rng.uniform(-0.3, 0.3) * host.ay,
                           rng.uniform(0.25, 0.6) * host.ax, rng.uniform(0.25, 0.6) * host.ay,
                           rng.uniform(0.0, std::numbers::pi)};
        }
        BinaryMask mask(size);
        for (int r = 0; r < size; ++r)
            for (int c = 0; c < size; ++c) {
                const double x = c + 0.5, y = r + 0.5;
                bool on = std::any_of(blobs.begin(), blobs.end(),
                                      [&](const Ellipse& e) { return e.contains(x, y); });
                if (on && hole && hole->contains(x, y)) on = false;
                mask.set(r, c, on);
            }
        const double frac = mask.foreground_fraction();
        if (frac >= 0.05 && frac <= 0.95 && has_mixed_patch(mask)) return mask;
    }
}

std::vector<BinaryMask> synth_corpus(std::uint64_t seed, int count, int size) {
    if (count < 1) throw InputError("corpus count must be at least 1");
    std::vector<BinaryMask> corpus;
    corpus.reserve(count);
    for (int i = 0; i < count; ++i) corpus.push_back(synth_mask(seed, i, size));
    return corpus;
}

std::string mask_digest(const BinaryMask& mask) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::uint8_t byte) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    };
    const auto size = static_cast<std::uint32_t>(mask.size());
    for (int shift = 0; shift < 32; shift += 8) feed(static_cast<std::uint8_t>(size >> shift));
    for (auto v : mask.values()) feed(v);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace patchdct
