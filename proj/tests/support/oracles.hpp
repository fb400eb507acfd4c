#pragma once

// Test-only reference implementations. None of these call into the library
// code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "patchdct/matrix.hpp"

namespace patchdct::oracle {

/// Literal double sum of the forward DCT-II, written out independently.
inline std::vector<std::vector<double>> dct_literal(const std::vector<std::vector<double>>& m) {
    const int k = static_cast<int>(m.size());
    auto c = [](int w) { return w == 0 ? 1.0 / std::sqrt(2.0) : 1.0; };
    std::vector<std::vector<double>> f(k, std::vector<double>(k, 0.0));
    for (int u = 0; u < k; ++u)
        for (int v = 0; v < k; ++v) {
            double s = 0.0;
            for (int x = 0; x < k; ++x)
                for (int y = 0; y < k; ++y)
                    s += m[x][y] * std::cos((2 * x + 1) * u * std::numbers::pi / (2.0 * k)) *
                         std::cos((2 * y + 1) * v * std::numbers::pi / (2.0 * k));
            f[u][v] = 2.0 / k * c(u) * c(v) * s;
        }
    return f;
}

inline std::vector<std::vector<double>> rows_of(const RealMatrix& m) {
    std::vector<std::vector<double>> out(m.size(), std::vector<double>(m.size()));
    for (int r = 0; r < m.size(); ++r)
        for (int c = 0; c < m.size(); ++c) out[r][c] = m(r, c);
    return out;
}

/// Zigzag by simulating the JPEG walk: move up-right / down-left and bounce
/// off the edges.
inline std::vector<std::pair<int, int>> zigzag_walk(int k) {
    std::vector<std::pair<int, int>> out{{0, 0}};
    int r = 0, c = 0;
    bool up = true;
    while (static_cast<int>(out.size()) < k * k) {
        if (up) {
            if (c == k - 1) { ++r; up = false; }
            else if (r == 0) { ++c; up = false; }
            else { --r; ++c; }
        } else {
            if (r == k - 1) { ++c; up = true; }
            else if (c == 0) { ++r; up = true; }
            else { ++r; --c; }
        }
        out.emplace_back(r, c);
    }
    return out;
}

/// Foreground pixels whose nearest background pixel (frame included) lies
/// within Euclidean distance d, by scanning every background pixel.
inline BinaryMask band_brute_force(const BinaryMask& mask, int d) {
    const int k = mask.size();
    std::vector<std::pair<int, int>> bg;
    for (int r = -1; r <= k; ++r)
        for (int c = -1; c <= k; ++c)
            if (r < 0 || c < 0 || r >= k || c >= k || !mask(r, c)) bg.emplace_back(r, c);
    BinaryMask out(k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            if (!mask(r, c)) continue;
            long best = -1;
            for (auto [br, bc] : bg) {
                const long dist = static_cast<long>(r - br) * (r - br) + static_cast<long>(c - bc) * (c - bc);
                if (best < 0 || dist < best) best = dist;
            }
            out.set(r, c, best <= static_cast<long>(d) * d);
        }
    return out;
}

inline double iou_count(const BinaryMask& a, const BinaryMask& b) {
    long inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        inter += a.values()[i] && b.values()[i];
        uni += a.values()[i] || b.values()[i];
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline BinaryMask random_mask(std::mt19937_64& rng, int k, double density = 0.5) {
    std::bernoulli_distribution coin(density);
    std::vector<std::uint8_t> v(static_cast<std::size_t>(k) * k);
    for (auto& x : v) x = coin(rng) ? 1 : 0;
    return BinaryMask(k, std::move(v));
}

inline RealMatrix random_matrix(std::mt19937_64& rng, int k, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(k) * k);
    for (auto& x : v) x = dist(rng);
    return RealMatrix(k, std::move(v));
}

inline BinaryMask square(int k, int lo, int hi) {
    BinaryMask m(k);
    for (int r = lo; r < hi; ++r)
        for (int c = lo; c < hi; ++c) m.set(r, c, true);
    return m;
}

}  // namespace patchdct::oracle
