#pragma once

#include <vector>

#include "patchdct/matrix.hpp"

namespace patchdct {

/// Reconstructed values strictly above this decode to foreground.
inline constexpr double kBinarizeThreshold = 0.5;
/// Reconstructions within this distance of the threshold count as "at" it
/// and decode to background.
inline constexpr double kBinarizeTolerance = 1e-9;

inline constexpr int kDefaultGlobalResolution = 128;
inline constexpr int kDefaultGlobalDim = 300;

/// Truncated zigzag sequence of a K x K coefficient matrix.
struct DctVector {
    int resolution = 0;
    std::vector<double> coeffs;

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(coeffs.size()); }
    bool operator==(const DctVector&) const = default;
};

/// Throws InputError unless 1 <= dim <= resolution^2 and all values finite.
void validate(const DctVector& v);

bool binarize(double value) noexcept;
BinaryMask binarize(const RealMatrix& m);

DctVector encode_mask(const BinaryMask& mask, int n);
BinaryMask decode_mask(const DctVector& v);

/// IoU between mask and its n-dimensional round trip.
double reconstruction_error(const BinaryMask& mask, int n);

}  // namespace patchdct
