#include "patchdct/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "patchdct/error.hpp"

namespace patchdct {
namespace {

std::size_t area(int size) {
    if (size < 1) throw InputError("matrix size must be positive, got " + std::to_string(size));
    return static_cast<std::size_t>(size) * static_cast<std::size_t>(size);
}

}  // namespace

RealMatrix::RealMatrix(int size, double fill) : size_(size), values_(area(size), fill) {}

RealMatrix::RealMatrix(int size, std::vector<double> values)
    : size_(size), values_(std::move(values)) {
    if (values_.size() != area(size))
        throw InputError("expected " + std::to_string(area(size)) + " values, got " +
                         std::to_string(values_.size()));
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }))
        throw InputError("matrix values must be finite");
}

BinaryMask::BinaryMask(int size, std::uint8_t fill) : size_(size), values_(area(size), fill) {
    if (fill > 1) throw InputError("mask labels must be 0 or 1");
}

BinaryMask::BinaryMask(int size, std::vector<std::uint8_t> values)
    : size_(size), values_(std::move(values)) {
    if (values_.size() != area(size))
        throw InputError("expected " + std::to_string(area(size)) + " labels, got " +
                         std::to_string(values_.size()));
    if (!std::all_of(values_.begin(), values_.end(), [](std::uint8_t v) { return v <= 1; }))
        throw InputError("mask labels must be 0 or 1");
}

std::size_t BinaryMask::count() const noexcept {
    return std::accumulate(values_.begin(), values_.end(), std::size_t{0});
}

double BinaryMask::foreground_fraction() const noexcept {
    return values_.empty() ? 0.0
                           : static_cast<double>(count()) / static_cast<double>(values_.size());
}

RealMatrix BinaryMask::to_real() const {
    return RealMatrix(size_, std::vector<double>(values_.begin(), values_.end()));
}

}  // namespace patchdct
