#include "patchdct/refine.hpp"

#include <cmath>
#include <string>

#include "patchdct/dct.hpp"
#include "patchdct/error.hpp"
#include "patchdct/mask_codec.hpp"
#include "patchdct/metrics.hpp"
#include "patchdct/rng.hpp"

namespace patchdct {
namespace {

PatchClass flip_class(PatchClass cls, Rng& rng) {
    // The two other classes, in enum order.
    const int skip = static_cast<int>(cls);
    int pick = static_cast<int>(rng.below(2));
    if (pick >= skip) ++pick;
    return static_cast<PatchClass>(pick);
}

// Grid produced by one oracle stage against truth.
PatchGrid oracle_grid(const BinaryMask& truth, const RefineConfig& cfg, Rng& rng) {
    PatchGrid grid{truth.size(), cfg.patch_size, cfg.patch_dim, {}};
    for (const auto& patch : partition(truth, cfg.patch_size)) {
        PatchRecord rec{classify_patch(patch), std::nullopt};
        if (cfg.flip_prob > 0.0 && rng.bernoulli(cfg.flip_prob)) rec.cls = flip_class(rec.cls, rng);
        if (rec.cls == PatchClass::Mixed) {
            // A patch flipped into Mixed still gets its truth coefficients,
            // which for a uniform patch are DC-only (or zero).
            DctVector v{cfg.patch_size, zigzag_scan(dct2d(patch.to_real()), cfg.patch_dim)};
            if (cfg.noise > 0.0)
                for (double& c : v.coeffs) c += cfg.noise * rng.normal();
            rec.vector = std::move(v);
        }
        grid.patches.push_back(std::move(rec));
    }
    return grid;
}

}  // namespace

void validate(const RefineConfig& cfg, int mask_size) {
    check_patch_size(mask_size, cfg.patch_size);
    const long max_dim = static_cast<long>(cfg.patch_size) * cfg.patch_size;
    if (cfg.patch_dim < 1 || cfg.patch_dim > max_dim)
        throw ConfigError("patch vector length " + std::to_string(cfg.patch_dim) +
                          " outside [1, " + std::to_string(max_dim) + "]");
    if (cfg.stages < 1) throw ConfigError("at least one refinement stage is required");
    if (!(cfg.flip_prob >= 0.0 && cfg.flip_prob <= 1.0))
        throw ConfigError("flip probability must lie in [0, 1]");
    if (!(cfg.noise >= 0.0) || !std::isfinite(cfg.noise))
        throw ConfigError("noise must be finite and non-negative");
}

RefineResult oracle_refine(const BinaryMask& coarse, const BinaryMask& truth,
                           const RefineConfig& cfg, std::uint64_t instance) {
    if (coarse.size() != truth.size())
        throw InputError("coarse mask is " + std::to_string(coarse.size()) + "x" +
                         std::to_string(coarse.size()) + " but truth is " +
                         std::to_string(truth.size()) + "x" + std::to_string(truth.size()));
    validate(cfg, truth.size());

    Rng rng = Rng::for_instance(cfg.seed, instance);
    RefineResult result{coarse, {}};
    for (int s = 0; s < cfg.stages; ++s) {
        RefineStage stage;
        stage.input = result.mask;
        stage.grid = oracle_grid(truth, cfg, rng);
        stage.output = assemble(stage.grid);
        stage.iou = iou(stage.output, truth);
        result.mask = stage.output;
        result.trace.stages.push_back(std::move(stage));
    }
    return result;
}

bool oracle_idempotence_check(const BinaryMask& truth, const RefineConfig& cfg) {
    if (cfg.flip_prob != 0.0 || cfg.noise != 0.0)
        throw ConfigError("idempotence check needs a noiseless configuration");
    RefineConfig two = cfg;
    two.stages = 2;
    const auto result = oracle_refine(truth, truth, two);
    return result.trace.stages[1].output == result.trace.stages[0].output;
}

BinaryMask global_reencode_baseline(const BinaryMask& truth, int n) {
    return decode_mask(encode_mask(truth, n));
}

}  // namespace patchdct
