#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "patchdct/mask_codec.hpp"
#include "patchdct/matrix.hpp"

namespace patchdct {

inline constexpr int kDefaultPatchSize = 8;
inline constexpr int kDefaultPatchDim = 6;
inline constexpr int kDefaultPatchResolution = 112;

enum class PatchClass { Background = 0, Foreground = 1, Mixed = 2 };

std::string_view to_string(PatchClass c) noexcept;
/// Accepts "bg", "fg" or "mixed". Throws ParseError otherwise.
PatchClass patch_class_from_string(std::string_view s);

struct PatchRecord {
    PatchClass cls = PatchClass::Background;
    std::optional<DctVector> vector;  // present iff cls == Mixed

    bool operator==(const PatchRecord&) const = default;
};

/// (K/m)^2 patch records in row-major order.
struct PatchGrid {
    int mask_size = 0;
    int patch_size = 0;
    int patch_dim = 0;
    std::vector<PatchRecord> patches;

    [[nodiscard]] int patches_per_side() const noexcept { return mask_size / patch_size; }
    [[nodiscard]] int count(PatchClass c) const noexcept;
    [[nodiscard]] int mixed_count() const noexcept { return count(PatchClass::Mixed); }
    [[nodiscard]] int total_count() const noexcept { return static_cast<int>(patches.size()); }

    bool operator==(const PatchGrid&) const = default;
};

/// Throws ConfigError unless patch_size >= 1 divides mask_size.
void check_patch_size(int mask_size, int patch_size);

/// Row-major m x m tiles of mask.
std::vector<BinaryMask> partition(const BinaryMask& mask, int patch_size);

/// Inverse of partition. Throws ConfigError if the tiles do not form a square.
BinaryMask tile(const std::vector<BinaryMask>& patches, int patch_size);

PatchClass classify_patch(const BinaryMask& patch);

/// Throws ClassError for non-mixed patches, LengthError for n outside [1, m^2].
DctVector encode_patch(const BinaryMask& patch, int n);

/// Throws ContractError if the vector's presence disagrees with cls or its
/// resolution is not patch_size.
BinaryMask decode_patch(PatchClass cls, const std::optional<DctVector>& vector,
                        int patch_size);

/// Partition, classify and encode every mixed patch with n coefficients.
PatchGrid build_grid(const BinaryMask& mask, int patch_size, int n);

/// Throws ContractError if the grid is incomplete or inconsistent.
void validate(const PatchGrid& grid);

BinaryMask assemble(const PatchGrid& grid);

/// Histogram of one coefficient position over patches of one class.
struct CoefficientHistogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<long> bins;
    long samples = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

struct CoefficientStats {
    int patch_size = 0;
    int patch_dim = 0;
    int bin_count = 0;
    /// Indexed by PatchClass, then coefficient position.
    std::array<std::vector<CoefficientHistogram>, 3> per_class;
    std::array<long, 3> patch_counts{};

    [[nodiscard]] const std::vector<CoefficientHistogram>& of(PatchClass c) const {
        return per_class[static_cast<int>(c)];
    }
};

/// Distribution of the first n zigzag coefficients of every patch in the
/// corpus, split by class. Bins span [-2m, 2m], which bounds any coefficient
/// of a binary patch. Throws InputError for an empty corpus.
CoefficientStats coefficient_stats(const std::vector<BinaryMask>& corpus, int patch_size,
                                   int n, int bin_count = 64);

}  // namespace patchdct
