#include "patchdct/dct.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "patchdct/error.hpp"

namespace patchdct {
namespace {

// Builds the order by walking anti-diagonals; odd diagonals run top-right to
// bottom-left, even ones bottom-left to top-right.
std::vector<IndexPair> make_zigzag(int size) {
    std::vector<IndexPair> order;
    order.reserve(static_cast<std::size_t>(size) * size);
    for (int diag = 0; diag <= 2 * (size - 1); ++diag) {
        const int lo = std::max(0, diag - (size - 1));
        const int hi = std::min(diag, size - 1);
        if (diag % 2 == 1) {
            for (int row = lo; row <= hi; ++row) order.emplace_back(row, diag - row);
        } else {
            for (int row = hi; row >= lo; --row) order.emplace_back(row, diag - row);
        }
    }
    return order;
}

// Per-size cache. Entries are never removed, so references stay valid.
template <typename T>
class SizeCache {
public:
    template <typename Make>
    const T& get(int size, Make make) {
        std::lock_guard lock(mutex_);
        auto& slot = entries_[size];
        if (!slot) slot = std::make_unique<const T>(make(size));
        return *slot;
    }

private:
    std::mutex mutex_;
    std::map<int, std::unique_ptr<const T>> entries_;
};

void check_size(int size) {
    if (size < 1) throw InputError("transform size must be positive");
}

// out = a * b^T where b is the basis (rows = frequencies) and a is K x K.
// Used for both passes: rows of a are transformed independently.
RealMatrix multiply_by_basis_transpose(const RealMatrix& a, const CosineBasis& b) {
    const int k = a.size();
    RealMatrix out(k);
    for (int r = 0; r < k; ++r)
        for (int f = 0; f < k; ++f) {
            double acc = 0.0;
            for (int x = 0; x < k; ++x) acc += a(r, x) * b(f, x);
            out(r, f) = acc;
        }
    return out;
}

// out = a * b (inverse pass).
RealMatrix multiply_by_basis(const RealMatrix& a, const CosineBasis& b) {
    const int k = a.size();
    RealMatrix out(k);
    for (int r = 0; r < k; ++r)
        for (int f = 0; f < k; ++f) {
            const double v = a(r, f);
            if (v == 0.0) continue;
            for (int x = 0; x < k; ++x) out(r, x) += v * b(f, x);
        }
    return out;
}

RealMatrix transpose(const RealMatrix& a) {
    RealMatrix out(a.size());
    for (int r = 0; r < a.size(); ++r)
        for (int c = 0; c < a.size(); ++c) out(c, r) = a(r, c);
    return out;
}

}  // namespace

double dct_normalization(int w) noexcept { return w == 0 ? 1.0 / std::numbers::sqrt2 : 1.0; }

CosineBasis::CosineBasis(int size) : size_(size) {
    check_size(size);
    entries_.resize(static_cast<std::size_t>(size) * size);
    const double scale = std::sqrt(2.0 / size);
    for (int u = 0; u < size; ++u)
        for (int x = 0; x < size; ++x)
            entries_[static_cast<std::size_t>(u) * size + x] =
                scale * dct_normalization(u) *
                std::cos((2.0 * x + 1.0) * u * std::numbers::pi / (2.0 * size));
}

const CosineBasis& basis_for(int size) {
    check_size(size);
    static SizeCache<CosineBasis> cache;
    return cache.get(size, [](int k) { return CosineBasis(k); });
}

RealMatrix dct2d(const RealMatrix& m) {
    const auto& basis = basis_for(m.size());
    // Rows: T = M B^T. Columns: F = B T = (T^T B^T)^T.
    const RealMatrix rows = multiply_by_basis_transpose(m, basis);
    return transpose(multiply_by_basis_transpose(transpose(rows), basis));
}

RealMatrix idct2d(const RealMatrix& f) {
    const auto& basis = basis_for(f.size());
    // Rows: T = F B. Columns: M = B^T T = (T^T B)^T.
    const RealMatrix rows = multiply_by_basis(f, basis);
    return transpose(multiply_by_basis(transpose(rows), basis));
}

RealMatrix dct2d_naive(const RealMatrix& m) {
    const int k = m.size();
    check_size(k);
    if (k > kNaiveDctMaxSize)
        throw ConfigError("dct2d_naive is limited to K <= " + std::to_string(kNaiveDctMaxSize) +
                          ", got " + std::to_string(k));
    RealMatrix out(k);
    const double pi = std::numbers::pi;
    for (int u = 0; u < k; ++u)
        for (int v = 0; v < k; ++v) {
            double sum = 0.0;
            for (int x = 0; x < k; ++x)
                for (int y = 0; y < k; ++y)
                    sum += m(x, y) * std::cos((2.0 * x + 1.0) * u * pi / (2.0 * k)) *
                           std::cos((2.0 * y + 1.0) * v * pi / (2.0 * k));
            out(u, v) = 2.0 / k * dct_normalization(u) * dct_normalization(v) * sum;
        }
    return out;
}

const std::vector<IndexPair>& zigzag_order(int size) {
    check_size(size);
    static SizeCache<std::vector<IndexPair>> cache;
    return cache.get(size, make_zigzag);
}

std::vector<double> zigzag_scan(const RealMatrix& f, int n) {
    const int k = f.size();
    const long total = static_cast<long>(k) * k;
    if (n < 1 || n > total)
        throw LengthError("scan length " + std::to_string(n) + " outside [1, " +
                          std::to_string(total) + "]");
    const auto& order = zigzag_order(k);
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(f(order[i].first, order[i].second));
    return out;
}

RealMatrix zigzag_unscan(std::span<const double> v, int size) {
    check_size(size);
    const std::size_t total = static_cast<std::size_t>(size) * size;
    if (v.size() > total)
        throw LengthError("vector of length " + std::to_string(v.size()) +
                          " does not fit a " + std::to_string(size) + "x" +
                          std::to_string(size) + " matrix");
    const auto& order = zigzag_order(size);
    RealMatrix out(size);
    for (std::size_t i = 0; i < v.size(); ++i) out(order[i].first, order[i].second) = v[i];
    return out;
}

}  // namespace patchdct
