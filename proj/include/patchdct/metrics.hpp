#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "patchdct/matrix.hpp"

namespace patchdct {

struct Confusion {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t false_negative = 0;
    std::size_t true_negative = 0;
};

/// Pixel confusion of pred against truth. Throws InputError on size mismatch.
Confusion confusion(const BinaryMask& pred, const BinaryMask& truth);

/// |a & b| / |a | b|, 1 when both are empty.
double iou(const BinaryMask& a, const BinaryMask& b);

/// Squared Euclidean distance from each foreground pixel to the nearest
/// background pixel, with everything outside the frame treated as
/// background. Background pixels get 0. Exact (separable two-pass lower
/// envelope transform).
std::vector<long> squared_distance_to_background(const BinaryMask& mask);

/// Foreground pixels within Euclidean distance d of the background.
/// Throws InputError if d < 1.
BinaryMask boundary_band(const BinaryMask& mask, int d);

double boundary_iou(const BinaryMask& a, const BinaryMask& b, int d);

/// max(1, round(0.02 * sqrt(2) * K)).
int default_band_width(int size) noexcept;

struct EvalRow {
    std::size_t index = 0;
    std::string name;
    double iou = 0.0;
    double boundary_iou = 0.0;
};

/// Configuration that produced a report; unused fields stay empty.
struct SweepKey {
    int resolution = 0;
    std::optional<int> global_dim;
    std::optional<int> patch_size;
    std::optional<int> patch_dim;
    std::optional<int> stages;
    std::optional<double> flip_prob;
    std::optional<double> noise;
    int band = 0;
};

struct EvalReport {
    std::size_t count = 0;
    double mean_iou = 0.0;
    double min_iou = 0.0;
    double max_iou = 0.0;
    double mean_boundary_iou = 0.0;
    double min_boundary_iou = 0.0;
    double max_boundary_iou = 0.0;
    std::vector<EvalRow> rows;
    SweepKey key;
};

/// Exact statistics over rows. Means are summed in sorted order so they do
/// not depend on row order. Throws InputError for no rows or scores
/// outside [0, 1].
EvalReport aggregate(std::vector<EvalRow> rows, SweepKey key = {});

/// Order-independent mean of values (sorted summation).
double stable_mean(std::vector<double> values);

}  // namespace patchdct
