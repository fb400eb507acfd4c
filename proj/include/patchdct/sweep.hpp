#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "patchdct/matrix.hpp"

namespace patchdct {

inline constexpr const char* kSweepCsvSchema = "patchdct-sweep-v1";

struct PatchSetting {
    int patch_size = 0;
    int patch_dim = 0;
};

/// Everything a sweep needs. Either annotations names a COCO-style file or
/// the corpus is synthesized from (seed, count).
struct SweepSpec {
    std::optional<std::filesystem::path> annotations;
    std::uint64_t seed = 0;
    int count = 100;
    int resolution = 112;
    std::vector<int> global_dims;
    std::vector<PatchSetting> patches;
    std::vector<int> stages{1};
    std::vector<double> flip_probs{0.0};
    std::vector<double> noises{0.0};
    std::optional<int> band;  // default_band_width(resolution) when empty
};

/// Throws InputError if the spec has no configuration or refers to a
/// missing file, ConfigError for unusable values.
void validate(const SweepSpec& spec);

/// Reads a SweepSpec JSON document. Relative annotation paths resolve
/// against base_dir. Throws ParseError.
SweepSpec sweep_spec_from_json(const nlohmann::json& j,
                               const std::filesystem::path& base_dir = {});

struct SweepRow {
    std::string kind;  // "global" or "patch"
    int resolution = 0;
    int global_dim = 0;
    PatchSetting patch;
    int stages = 0;
    double flip_prob = 0.0;
    double noise = 0.0;
    int band = 0;
    std::size_t count = 0;
    double mean_iou = 0.0;
    double mean_boundary_iou = 0.0;
};

/// Loads or synthesizes the truth masks at spec.resolution, in order.
std::vector<BinaryMask> load_corpus(const SweepSpec& spec);

/// One row per configuration: global dims first, then the product
/// patches x stages x flip_probs x noises in that nesting order.
/// threads == 0 means thread_limit().
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads = 0);
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const std::vector<BinaryMask>& corpus,
                                int threads = 0);

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Hardware concurrency capped by PATCHDCT_THREADS when set (minimum 1).
int thread_limit();

/// Calls body(i) for i in [0, n) on up to `threads` workers. body must only
/// write to per-index state. The first exception thrown is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace patchdct
