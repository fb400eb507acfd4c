#include "patchdct/patch_codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "patchdct/dct.hpp"
#include "patchdct/error.hpp"

namespace patchdct {

std::string_view to_string(PatchClass c) noexcept {
    switch (c) {
        case PatchClass::Background: return "bg";
        case PatchClass::Foreground: return "fg";
        case PatchClass::Mixed: return "mixed";
    }
    return "?";
}

PatchClass patch_class_from_string(std::string_view s) {
    if (s == "bg") return PatchClass::Background;
    if (s == "fg") return PatchClass::Foreground;
    if (s == "mixed") return PatchClass::Mixed;
    throw ParseError("unknown patch class '" + std::string(s) + "'");
}

int PatchGrid::count(PatchClass c) const noexcept {
    return static_cast<int>(
        std::count_if(patches.begin(), patches.end(), [c](const auto& p) { return p.cls == c; }));
}

void check_patch_size(int mask_size, int patch_size) {
    if (patch_size < 1 || mask_size < 1 || mask_size % patch_size != 0)
        throw ConfigError("patch size " + std::to_string(patch_size) + " does not divide mask size " +
                          std::to_string(mask_size));
}

std::vector<BinaryMask> partition(const BinaryMask& mask, int patch_size) {
    check_patch_size(mask.size(), patch_size);
    const int per_side = mask.size() / patch_size;
    std::vector<BinaryMask> out;
    out.reserve(static_cast<std::size_t>(per_side) * per_side);
    for (int pr = 0; pr < per_side; ++pr)
        for (int pc = 0; pc < per_side; ++pc) {
            BinaryMask patch(patch_size);
            for (int r = 0; r < patch_size; ++r)
                for (int c = 0; c < patch_size; ++c)
                    patch.set(r, c, mask(pr * patch_size + r, pc * patch_size + c));
            out.push_back(std::move(patch));
        }
    return out;
}

BinaryMask tile(const std::vector<BinaryMask>& patches, int patch_size) {
    const int per_side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(patches.size()))));
    if (per_side < 1 || static_cast<std::size_t>(per_side) * per_side != patches.size())
        throw ConfigError("patch count " + std::to_string(patches.size()) + " is not a square");
    BinaryMask out(per_side * patch_size);
    for (int pr = 0; pr < per_side; ++pr)
        for (int pc = 0; pc < per_side; ++pc) {
            const auto& patch = patches[static_cast<std::size_t>(pr) * per_side + pc];
            if (patch.size() != patch_size) throw ConfigError("patch has wrong size");
            for (int r = 0; r < patch_size; ++r)
                for (int c = 0; c < patch_size; ++c)
                    out.set(pr * patch_size + r, pc * patch_size + c, patch(r, c));
        }
    return out;
}

PatchClass classify_patch(const BinaryMask& patch) {
    const std::size_t ones = patch.count();
    if (ones == 0) return PatchClass::Background;
    if (ones == patch.values().size()) return PatchClass::Foreground;
    return PatchClass::Mixed;
}

DctVector encode_patch(const BinaryMask& patch, int n) {
    if (const auto cls = classify_patch(patch); cls != PatchClass::Mixed)
        throw ClassError("only mixed patches are encoded, got " + std::string(to_string(cls)));
    return encode_mask(patch, n);
}

BinaryMask decode_patch(PatchClass cls, const std::optional<DctVector>& vector, int patch_size) {
    if (vector.has_value() != (cls == PatchClass::Mixed))
        throw ContractError(std::string(to_string(cls)) + " patch " +
                            (vector ? "must not carry" : "requires") + " a DCT vector");
    switch (cls) {
        case PatchClass::Background: return BinaryMask(patch_size, 0);
        case PatchClass::Foreground: return BinaryMask(patch_size, 1);
        case PatchClass::Mixed:
            if (vector->resolution != patch_size)
                throw ContractError("vector resolution " + std::to_string(vector->resolution) +
                                    " does not match patch size " + std::to_string(patch_size));
            return decode_mask(*vector);
    }
    throw InvariantError("unreachable patch class");
}

PatchGrid build_grid(const BinaryMask& mask, int patch_size, int n) {
    PatchGrid grid{mask.size(), patch_size, n, {}};
    for (const auto& patch : partition(mask, patch_size)) {
        PatchRecord rec{classify_patch(patch), std::nullopt};
        if (rec.cls == PatchClass::Mixed) rec.vector = encode_patch(patch, n);
        grid.patches.push_back(std::move(rec));
    }
    return grid;
}

void validate(const PatchGrid& grid) {
    check_patch_size(grid.mask_size, grid.patch_size);
    const auto per_side = static_cast<std::size_t>(grid.patches_per_side());
    if (grid.patches.size() != per_side * per_side)
        throw ContractError("grid holds " + std::to_string(grid.patches.size()) +
                            " patches, expected " + std::to_string(per_side * per_side));
    const long max_dim = static_cast<long>(grid.patch_size) * grid.patch_size;
    if (grid.patch_dim < 1 || grid.patch_dim > max_dim)
        throw LengthError("patch vector length " + std::to_string(grid.patch_dim) +
                          " outside [1, " + std::to_string(max_dim) + "]");
    for (const auto& p : grid.patches) {
        if (p.vector.has_value() != (p.cls == PatchClass::Mixed))
            throw ContractError("patch class and vector presence disagree");
        if (p.vector && (p.vector->dim() != grid.patch_dim ||
                         p.vector->resolution != grid.patch_size))
            throw ContractError("patch vector shape does not match the grid");
    }
}

BinaryMask assemble(const PatchGrid& grid) {
    validate(grid);
    std::vector<BinaryMask> patches;
    patches.reserve(grid.patches.size());
    for (const auto& p : grid.patches)
        patches.push_back(decode_patch(p.cls, p.vector, grid.patch_size));
    return tile(patches, grid.patch_size);
}

CoefficientStats coefficient_stats(const std::vector<BinaryMask>& corpus, int patch_size, int n,
                                   int bin_count) {
    if (corpus.empty()) throw InputError("coefficient statistics need a non-empty corpus");
    if (bin_count < 1) throw ConfigError("bin count must be positive");
    const long max_dim = static_cast<long>(patch_size) * patch_size;
    if (n < 1 || n > max_dim)
        throw LengthError("patch vector length " + std::to_string(n) + " outside [1, " +
                          std::to_string(max_dim) + "]");

    CoefficientStats stats;
    stats.patch_size = patch_size;
    stats.patch_dim = n;
    stats.bin_count = bin_count;
    const double lo = -2.0 * patch_size;
    const double hi = 2.0 * patch_size;
    for (auto& per_pos : stats.per_class) {
        per_pos.assign(n, CoefficientHistogram{lo, hi, std::vector<long>(bin_count, 0), 0, 0, 0, 0});
    }
    std::array<std::vector<std::vector<double>>, 3> samples;
    for (auto& s : samples) s.assign(n, {});

    for (const auto& mask : corpus)
        for (const auto& patch : partition(mask, patch_size)) {
            const int cls = static_cast<int>(classify_patch(patch));
            ++stats.patch_counts[cls];
            const auto coeffs = zigzag_scan(dct2d(patch.to_real()), n);
            for (int i = 0; i < n; ++i) samples[cls][i].push_back(coeffs[i]);
        }

    const double width = (hi - lo) / bin_count;
    for (int cls = 0; cls < 3; ++cls)
        for (int i = 0; i < n; ++i) {
            auto& h = stats.per_class[cls][i];
            auto& values = samples[cls][i];
            if (values.empty()) continue;
            std::sort(values.begin(), values.end());
            h.samples = static_cast<long>(values.size());
            h.min = values.front();
            h.max = values.back();
            double sum = 0.0;
            for (double v : values) {
                sum += v;
                const int bin = std::clamp(static_cast<int>(std::floor((v - lo) / width)), 0,
                                           bin_count - 1);
                ++h.bins[bin];
            }
            h.mean = sum / static_cast<double>(values.size());
        }
    return stats;
}

}  // namespace patchdct
