#include "patchdct/mask_codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "patchdct/dct.hpp"
#include "patchdct/error.hpp"
#include "patchdct/metrics.hpp"

namespace patchdct {

void validate(const DctVector& v) {
    if (v.resolution < 1) throw InputError("DCT vector resolution must be positive");
    const long total = static_cast<long>(v.resolution) * v.resolution;
    if (v.dim() < 1 || v.dim() > total)
        throw LengthError("DCT vector length " + std::to_string(v.dim()) + " outside [1, " +
                          std::to_string(total) + "]");
    if (!std::all_of(v.coeffs.begin(), v.coeffs.end(), [](double c) { return std::isfinite(c); }))
        throw InputError("DCT vector coefficients must be finite");
}

bool binarize(double value) noexcept {
    return value > kBinarizeThreshold + kBinarizeTolerance;
}

BinaryMask binarize(const RealMatrix& m) {
    std::vector<std::uint8_t> labels;
    labels.reserve(m.values().size());
    for (double v : m.values()) labels.push_back(binarize(v) ? 1 : 0);
    return BinaryMask(m.size(), std::move(labels));
}

DctVector encode_mask(const BinaryMask& mask, int n) {
    return DctVector{mask.size(), zigzag_scan(dct2d(mask.to_real()), n)};
}

BinaryMask decode_mask(const DctVector& v) {
    validate(v);
    return binarize(idct2d(zigzag_unscan(v.coeffs, v.resolution)));
}

double reconstruction_error(const BinaryMask& mask, int n) {
    return iou(mask, decode_mask(encode_mask(mask, n)));
}

}  // namespace patchdct
