#include "patchdct/loss.hpp"

#include <cmath>
#include <string>

#include "patchdct/error.hpp"

namespace patchdct {
namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw LengthError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                          std::to_string(b) + ")");
}

double sign(double x) noexcept { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_patch_shapes(const std::vector<std::vector<double>>& pred,
                        const std::vector<std::vector<double>>& target,
                        std::span<const PatchClass> classes) {
    check_lengths(pred.size(), target.size(), "patch predictions");
    check_lengths(pred.size(), classes.size(), "patch classes");
    for (std::size_t k = 0; k < pred.size(); ++k)
        check_lengths(pred[k].size(), target[k].size(), "patch vector");
}

std::size_t mixed_count(std::span<const PatchClass> classes) {
    std::size_t n = 0;
    for (auto c : classes) n += c == PatchClass::Mixed;
    return n;
}

}  // namespace

int prob_column(PatchClass c) noexcept {
    switch (c) {
        case PatchClass::Foreground: return 0;
        case PatchClass::Background: return 1;
        case PatchClass::Mixed: return 2;
    }
    return 2;
}

void validate_probs(std::span<const ClassProbs> probs) {
    for (std::size_t k = 0; k < probs.size(); ++k) {
        double sum = 0.0;
        for (double p : probs[k]) {
            if (!(p >= 0.0) || !std::isfinite(p))
                throw InputError("negative or non-finite probability in patch " + std::to_string(k));
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw InputError("probabilities of patch " + std::to_string(k) + " sum to " +
                             std::to_string(sum));
    }
}

double l_dct_global(std::span<const double> pred, std::span<const double> target) {
    check_lengths(pred.size(), target.size(), "l_dct_global");
    if (pred.empty()) throw LengthError("l_dct_global: empty vectors");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred[i] - target[i]);
    return sum / static_cast<double>(pred.size());
}

std::vector<double> l_dct_global_grad(std::span<const double> pred,
                                      std::span<const double> target) {
    check_lengths(pred.size(), target.size(), "l_dct_global");
    if (pred.empty()) throw LengthError("l_dct_global: empty vectors");
    std::vector<double> g(pred.size());
    const double scale = 1.0 / static_cast<double>(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) g[i] = sign(pred[i] - target[i]) * scale;
    return g;
}

double l_cls_patch(std::span<const ClassProbs> pred, std::span<const PatchClass> target) {
    check_lengths(pred.size(), target.size(), "l_cls_patch");
    if (pred.empty()) throw LengthError("l_cls_patch: no patches");
    validate_probs(pred);
    double sum = 0.0;
    for (std::size_t k = 0; k < pred.size(); ++k)
        sum -= std::log(std::max(pred[k][prob_column(target[k])], kProbabilityFloor));
    return sum / static_cast<double>(pred.size());
}

std::vector<ClassProbs> l_cls_patch_grad(std::span<const ClassProbs> pred,
                                         std::span<const PatchClass> target) {
    check_lengths(pred.size(), target.size(), "l_cls_patch");
    if (pred.empty()) throw LengthError("l_cls_patch: no patches");
    std::vector<ClassProbs> g(pred.size(), ClassProbs{0.0, 0.0, 0.0});
    const double scale = 1.0 / static_cast<double>(pred.size());
    for (std::size_t k = 0; k < pred.size(); ++k) {
        const int col = prob_column(target[k]);
        const double p = pred[k][col];
        // Below the floor the loss is constant.
        if (p > kProbabilityFloor) g[k][col] = -scale / p;
    }
    return g;
}

double l_dct_patch(const std::vector<std::vector<double>>& pred,
                   const std::vector<std::vector<double>>& target,
                   std::span<const PatchClass> classes) {
    check_patch_shapes(pred, target, classes);
    const std::size_t mixed = mixed_count(classes);
    if (mixed == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < pred.size(); ++k)
        if (classes[k] == PatchClass::Mixed) sum += l_dct_global(pred[k], target[k]);
    return sum / static_cast<double>(mixed);
}

std::vector<std::vector<double>> l_dct_patch_grad(
    const std::vector<std::vector<double>>& pred,
    const std::vector<std::vector<double>>& target, std::span<const PatchClass> classes) {
    check_patch_shapes(pred, target, classes);
    std::vector<std::vector<double>> g(pred.size());
    const std::size_t mixed = mixed_count(classes);
    for (std::size_t k = 0; k < pred.size(); ++k) {
        g[k].assign(pred[k].size(), 0.0);
        if (classes[k] != PatchClass::Mixed) continue;
        auto inner = l_dct_global_grad(pred[k], target[k]);
        for (std::size_t i = 0; i < inner.size(); ++i)
            g[k][i] = inner[i] / static_cast<double>(mixed);
    }
    return g;
}

namespace {

void check_terms(const MaskLossTerms& terms, const LossWeights& weights) {
    if (terms.stage_cls.empty()) throw LengthError("l_mask needs at least one stage");
    check_lengths(terms.stage_cls.size(), terms.stage_dct.size(), "l_mask stage terms");
    check_lengths(terms.stage_cls.size(), weights.stages.size(), "l_mask stage weights");
    auto bad = [](double w) { return !(w >= 0.0) || !std::isfinite(w); };
    if (bad(weights.global)) throw InputError("loss weights must be finite and non-negative");
    for (double w : weights.stages)
        if (bad(w)) throw InputError("loss weights must be finite and non-negative");
}

}  // namespace

double l_mask(const MaskLossTerms& terms, const LossWeights& weights) {
    check_terms(terms, weights);
    double total = weights.global * terms.global_dct;
    for (std::size_t s = 0; s < weights.stages.size(); ++s)
        total += weights.stages[s] * (terms.stage_cls[s] + terms.stage_dct[s]);
    return total;
}

MaskLossTerms l_mask_grad(const MaskLossTerms& terms, const LossWeights& weights) {
    check_terms(terms, weights);
    return MaskLossTerms{weights.global, weights.stages, weights.stages};
}

}  // namespace patchdct
