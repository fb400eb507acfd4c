#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace patchdct {

/// Square K x K matrix of doubles, row-major. Row index is the first
/// spatial (x) or frequency (u) coordinate, column index the second.
class RealMatrix {
public:
    RealMatrix() = default;
    explicit RealMatrix(int size, double fill = 0.0);
    RealMatrix(int size, std::vector<double> values);

    [[nodiscard]] int size() const noexcept { return size_; }
    [[nodiscard]] double operator()(int row, int col) const noexcept {
        return values_[static_cast<std::size_t>(row) * size_ + col];
    }
    double& operator()(int row, int col) noexcept {
        return values_[static_cast<std::size_t>(row) * size_ + col];
    }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }

    bool operator==(const RealMatrix&) const = default;

private:
    int size_ = 0;
    std::vector<double> values_;
};

/// K x K grid of {0,1} labels, row-major.
class BinaryMask {
public:
    BinaryMask() = default;
    explicit BinaryMask(int size, std::uint8_t fill = 0);
    /// Throws InputError if any value is not 0 or 1 or the count is not size^2.
    BinaryMask(int size, std::vector<std::uint8_t> values);

    [[nodiscard]] int size() const noexcept { return size_; }
    [[nodiscard]] std::uint8_t operator()(int row, int col) const noexcept {
        return values_[static_cast<std::size_t>(row) * size_ + col];
    }
    void set(int row, int col, bool on) noexcept {
        values_[static_cast<std::size_t>(row) * size_ + col] = on ? 1 : 0;
    }
    [[nodiscard]] std::span<const std::uint8_t> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t count() const noexcept;
    [[nodiscard]] double foreground_fraction() const noexcept;

    [[nodiscard]] RealMatrix to_real() const;

    bool operator==(const BinaryMask&) const = default;

private:
    int size_ = 0;
    std::vector<std::uint8_t> values_;
};

}  // namespace patchdct
