#pragma once

#include <span>
#include <utility>
#include <vector>

#include "patchdct/matrix.hpp"

namespace patchdct {

/// Largest size accepted by dct2d_naive. Beyond this the O(K^4) loop is too
/// slow to be a useful oracle.
inline constexpr int kNaiveDctMaxSize = 64;

/// Orthonormal DCT-II basis of size K: entry (u, x) is
/// sqrt(2/K) * C(u) * cos((2x+1) u pi / 2K), C(0) = 1/sqrt(2), else 1.
/// Instances are immutable and shared through basis_for().
class CosineBasis {
public:
    explicit CosineBasis(int size);

    [[nodiscard]] int size() const noexcept { return size_; }
    [[nodiscard]] double operator()(int freq, int pos) const noexcept {
        return entries_[static_cast<std::size_t>(freq) * size_ + pos];
    }

private:
    int size_;
    std::vector<double> entries_;
};

/// Cached basis for size K. Thread-safe; every caller gets the same object.
const CosineBasis& basis_for(int size);

/// Normalization C(w) of the cosine transform.
double dct_normalization(int w) noexcept;

/// Separable forward transform F = B M B^T.
RealMatrix dct2d(const RealMatrix& m);

/// Separable inverse transform M = B^T F B.
RealMatrix idct2d(const RealMatrix& f);

/// Literal quadruple-sum forward transform, kept as a reference path.
/// Throws ConfigError when size exceeds kNaiveDctMaxSize.
RealMatrix dct2d_naive(const RealMatrix& m);

using IndexPair = std::pair<int, int>;

/// JPEG-style zigzag order for a K x K matrix: (0,0), (0,1), (1,0), (2,0), ...
/// Cached per size; scan and unscan both read from here.
const std::vector<IndexPair>& zigzag_order(int size);

/// First n coefficients of f in zigzag order. Throws LengthError unless
/// 1 <= n <= K^2.
std::vector<double> zigzag_scan(const RealMatrix& f, int n);

/// Inverse of zigzag_scan; positions past the end of v are zero.
/// Throws LengthError if v is longer than K^2.
RealMatrix zigzag_unscan(std::span<const double> v, int size);

}  // namespace patchdct
