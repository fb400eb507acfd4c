#include "patchdct/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "patchdct/error.hpp"

namespace patchdct {
namespace {

void check_same_size(const BinaryMask& a, const BinaryMask& b) {
    if (a.size() != b.size())
        throw InputError("mask sizes differ: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
}

constexpr long kInfinity = std::numeric_limits<long>::max() / 4;

// One-dimensional squared distance transform of sampled function f
// (lower envelope of parabolas). Writes into d.
void distance_1d(const std::vector<long>& f, std::vector<long>& d, std::vector<int>& hull,
                 std::vector<double>& bounds) {
    const int n = static_cast<int>(f.size());
    int k = 0;
    hull[0] = 0;
    bounds[0] = -std::numeric_limits<double>::infinity();
    bounds[1] = std::numeric_limits<double>::infinity();
    auto intersect = [&](int q, int p) {
        return (static_cast<double>(f[q] + static_cast<long>(q) * q) -
                static_cast<double>(f[p] + static_cast<long>(p) * p)) /
               (2.0 * (q - p));
    };
    for (int q = 1; q < n; ++q) {
        if (f[q] >= kInfinity) continue;
        if (f[hull[k]] >= kInfinity) {
            hull[k] = q;
            continue;
        }
        double s = intersect(q, hull[k]);
        while (k > 0 && s <= bounds[k]) {
            --k;
            s = intersect(q, hull[k]);
        }
        ++k;
        hull[k] = q;
        bounds[k] = s;
        bounds[k + 1] = std::numeric_limits<double>::infinity();
    }
    if (f[hull[0]] >= kInfinity) {
        std::fill(d.begin(), d.end(), kInfinity);
        return;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (bounds[k + 1] < q) ++k;
        const long dq = q - hull[k];
        d[q] = dq * dq + f[hull[k]];
    }
}

}  // namespace

Confusion confusion(const BinaryMask& pred, const BinaryMask& truth) {
    check_same_size(pred, truth);
    Confusion c;
    const auto p = pred.values();
    const auto t = truth.values();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] && t[i]) ++c.true_positive;
        else if (p[i]) ++c.false_positive;
        else if (t[i]) ++c.false_negative;
        else ++c.true_negative;
    }
    return c;
}

double iou(const BinaryMask& a, const BinaryMask& b) {
    const Confusion c = confusion(a, b);
    const std::size_t uni = c.true_positive + c.false_positive + c.false_negative;
    if (uni == 0) return 1.0;
    return static_cast<double>(c.true_positive) / static_cast<double>(uni);
}

std::vector<long> squared_distance_to_background(const BinaryMask& mask) {
    // Work on a grid padded by one background pixel on every side so the
    // frame acts as background.
    const int k = mask.size();
    const int p = k + 2;
    std::vector<long> grid(static_cast<std::size_t>(p) * p, 0);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            grid[static_cast<std::size_t>(r + 1) * p + c + 1] = mask(r, c) ? kInfinity : 0;

    std::vector<long> f(p), d(p);
    std::vector<int> hull(p);
    std::vector<double> bounds(p + 1);
    // Columns.
    for (int c = 0; c < p; ++c) {
        for (int r = 0; r < p; ++r) f[r] = grid[static_cast<std::size_t>(r) * p + c];
        distance_1d(f, d, hull, bounds);
        for (int r = 0; r < p; ++r) grid[static_cast<std::size_t>(r) * p + c] = d[r];
    }
    // Rows.
    for (int r = 0; r < p; ++r) {
        std::copy_n(grid.begin() + static_cast<std::ptrdiff_t>(r) * p, p, f.begin());
        distance_1d(f, d, hull, bounds);
        std::copy_n(d.begin(), p, grid.begin() + static_cast<std::ptrdiff_t>(r) * p);
    }

    std::vector<long> out(static_cast<std::size_t>(k) * k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            out[static_cast<std::size_t>(r) * k + c] =
                grid[static_cast<std::size_t>(r + 1) * p + c + 1];
    return out;
}

BinaryMask boundary_band(const BinaryMask& mask, int d) {
    if (d < 1) throw InputError("band width must be at least 1, got " + std::to_string(d));
    const auto dist = squared_distance_to_background(mask);
    const long limit = static_cast<long>(d) * d;
    std::vector<std::uint8_t> band(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i)
        band[i] = (mask.values()[i] && dist[i] <= limit) ? 1 : 0;
    return BinaryMask(mask.size(), std::move(band));
}

double boundary_iou(const BinaryMask& a, const BinaryMask& b, int d) {
    check_same_size(a, b);
    return iou(boundary_band(a, d), boundary_band(b, d));
}

int default_band_width(int size) noexcept {
    return std::max(1, static_cast<int>(std::lround(0.02 * std::sqrt(2.0) * size)));
}

double stable_mean(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

EvalReport aggregate(std::vector<EvalRow> rows, SweepKey key) {
    if (rows.empty()) throw InputError("cannot aggregate an empty set of rows");
    std::vector<double> ious, bious;
    ious.reserve(rows.size());
    bious.reserve(rows.size());
    for (const auto& row : rows) {
        for (double s : {row.iou, row.boundary_iou})
            if (!(s >= 0.0 && s <= 1.0))
                throw InputError("score outside [0, 1] in row " + std::to_string(row.index));
        ious.push_back(row.iou);
        bious.push_back(row.boundary_iou);
    }
    EvalReport report;
    report.count = rows.size();
    const auto [imin, imax] = std::minmax_element(ious.begin(), ious.end());
    const auto [bmin, bmax] = std::minmax_element(bious.begin(), bious.end());
    report.min_iou = *imin;
    report.max_iou = *imax;
    report.min_boundary_iou = *bmin;
    report.max_boundary_iou = *bmax;
    report.mean_iou = stable_mean(std::move(ious));
    report.mean_boundary_iou = stable_mean(std::move(bious));
    report.rows = std::move(rows);
    report.key = key;
    return report;
}

}  // namespace patchdct
