#pragma once

#include <array>
#include <span>
#include <vector>

#include "patchdct/patch_codec.hpp"

namespace patchdct {

inline constexpr double kProbabilityFloor = 1e-12;

/// Probabilities per patch, ordered (fg, bg, mixed).
using ClassProbs = std::array<double, 3>;

/// Column of a class inside ClassProbs.
int prob_column(PatchClass c) noexcept;

/// Throws InputError unless every row is non-negative and sums to 1 (1e-9).
void validate_probs(std::span<const ClassProbs> probs);

struct LossWeights {
    double global = 1.0;
    std::vector<double> stages{1.0};
};

/// Global and per-stage terms fed into l_mask.
struct MaskLossTerms {
    double global_dct = 0.0;
    std::vector<double> stage_cls;
    std::vector<double> stage_dct;
};

/// Mean absolute error over the vector.
double l_dct_global(std::span<const double> pred, std::span<const double> target);
std::vector<double> l_dct_global_grad(std::span<const double> pred,
                                      std::span<const double> target);

/// Mean over patches of -log max(p_true, floor).
double l_cls_patch(std::span<const ClassProbs> pred, std::span<const PatchClass> target);
std::vector<ClassProbs> l_cls_patch_grad(std::span<const ClassProbs> pred,
                                         std::span<const PatchClass> target);

/// Mixed-patch regression loss. Each entry of pred/target is one patch's
/// n-vector; only patches whose target class is Mixed contribute, and the
/// sum is divided by the number of mixed patches (0 when there are none).
double l_dct_patch(const std::vector<std::vector<double>>& pred,
                   const std::vector<std::vector<double>>& target,
                   std::span<const PatchClass> classes);
std::vector<std::vector<double>> l_dct_patch_grad(
    const std::vector<std::vector<double>>& pred,
    const std::vector<std::vector<double>>& target, std::span<const PatchClass> classes);

/// lambda_0 * global + sum_s lambda_s * (cls_s + dct_s).
double l_mask(const MaskLossTerms& terms, const LossWeights& weights);

/// Partial derivatives of l_mask with respect to each term, laid out like
/// MaskLossTerms.
MaskLossTerms l_mask_grad(const MaskLossTerms& terms, const LossWeights& weights);

}  // namespace patchdct
