#pragma once

#include <cstdint>
#include <vector>

#include "patchdct/matrix.hpp"
#include "patchdct/patch_codec.hpp"

namespace patchdct {

struct RefineConfig {
    int patch_size = kDefaultPatchSize;
    int patch_dim = kDefaultPatchDim;
    int stages = 1;
    double flip_prob = 0.0;
    double noise = 0.0;
    std::uint64_t seed = 0;
};

/// Throws ConfigError if cfg is unusable for masks of size mask_size.
void validate(const RefineConfig& cfg, int mask_size);

struct RefineStage {
    BinaryMask input;
    PatchGrid grid;
    BinaryMask output;
    double iou = 0.0;
};

struct RefineTrace {
    std::vector<RefineStage> stages;
};

struct RefineResult {
    BinaryMask mask;
    RefineTrace trace;
};

/// Runs cfg.stages refinement stages whose classifier and regressor outputs
/// come from truth: each patch takes the class of the matching truth patch
/// (replaced by one of the other two classes with probability flip_prob),
/// and mixed patches take the truth patch's n-vector plus N(0, noise^2)
/// per coefficient. The stage input only feeds the trace, so without
/// corruption the result does not depend on coarse.
///
/// instance selects the rng stream, so corpus items are independent of
/// evaluation order. Throws InputError on size mismatch.
RefineResult oracle_refine(const BinaryMask& coarse, const BinaryMask& truth,
                           const RefineConfig& cfg, std::uint64_t instance = 0);

/// True iff a noiseless two-stage run gives the same mask at both stages.
/// Throws ConfigError if cfg carries corruption.
bool oracle_idempotence_check(const BinaryMask& truth, const RefineConfig& cfg);

/// Global codec round trip with n coefficients.
BinaryMask global_reencode_baseline(const BinaryMask& truth, int n);

}  // namespace patchdct
