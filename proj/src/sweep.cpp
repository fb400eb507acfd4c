#include "patchdct/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "patchdct/error.hpp"
#include "patchdct/ingest.hpp"
#include "patchdct/io.hpp"
#include "patchdct/mask_codec.hpp"
#include "patchdct/metrics.hpp"
#include "patchdct/refine.hpp"

namespace patchdct {
namespace {

using nlohmann::json;

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

std::string general(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

template <typename T>
std::vector<T> list_field(const json& j, const char* name, std::vector<T> fallback) {
    const auto it = j.find(name);
    if (it == j.end()) return fallback;
    if (!it->is_array()) throw ParseError(std::string("'") + name + "' must be an array");
    try {
        return it->get<std::vector<T>>();
    } catch (const json::exception&) {
        throw ParseError(std::string("'") + name + "' has elements of the wrong type");
    }
}

// Truth-derived oracle refinement ignores its coarse input, so the global
// default-dim reconstruction stands in as a realistic first-stage mask.
BinaryMask coarse_for(const BinaryMask& truth) {
    const long full = static_cast<long>(truth.size()) * truth.size();
    return global_reencode_baseline(truth, static_cast<int>(std::min<long>(kDefaultGlobalDim, full)));
}

}  // namespace

int thread_limit() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("PATCHDCT_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    const std::size_t workers =
        std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        next.store(n);
                    }
                }
            });
    }
    if (error) std::rethrow_exception(error);
}

void validate(const SweepSpec& spec) {
    if (spec.global_dims.empty() && spec.patches.empty())
        throw InputError("sweep needs at least one global dim or patch setting");
    if (spec.resolution < 1) throw ConfigError("resolution must be positive");
    if (spec.annotations && !std::filesystem::exists(*spec.annotations))
        throw InputError("annotation file not found: " + spec.annotations->string());
    if (!spec.annotations && spec.count < 1) throw ConfigError("synthetic count must be >= 1");
    const long full = static_cast<long>(spec.resolution) * spec.resolution;
    for (int n : spec.global_dims)
        if (n < 1 || n > full)
            throw ConfigError("global dim " + std::to_string(n) + " outside [1, " +
                              std::to_string(full) + "]");
    if (!spec.patches.empty() &&
        (spec.stages.empty() || spec.flip_probs.empty() || spec.noises.empty()))
        throw ConfigError("stages, flip_probs and noises must not be empty");
    for (const auto& p : spec.patches)
        for (int s : spec.stages)
            for (double f : spec.flip_probs)
                for (double z : spec.noises)
                    validate(RefineConfig{p.patch_size, p.patch_dim, s, f, z, spec.seed},
                             spec.resolution);
    if (spec.band && *spec.band < 1) throw ConfigError("band must be >= 1");
}

SweepSpec sweep_spec_from_json(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ParseError("sweep spec must be a JSON object");
    SweepSpec spec;
    const auto corpus = j.find("corpus");
    if (corpus == j.end() || !corpus->is_object()) throw ParseError("sweep spec needs 'corpus'");
    if (const auto ann = corpus->find("annotations"); ann != corpus->end()) {
        if (!ann->is_string()) throw ParseError("'corpus.annotations' must be a path");
        std::filesystem::path p = ann->get<std::string>();
        spec.annotations = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    } else if (const auto syn = corpus->find("synthetic"); syn != corpus->end()) {
        try {
            spec.seed = syn->at("seed").get<std::uint64_t>();
            spec.count = syn->at("count").get<int>();
        } catch (const json::exception&) {
            throw ParseError("'corpus.synthetic' needs integer 'seed' and 'count'");
        }
    } else {
        throw ParseError("'corpus' must name 'annotations' or 'synthetic'");
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ParseError("'seed' must be a non-negative integer");
        spec.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("resolution")) {
        if (!j["resolution"].is_number_integer()) throw ParseError("'resolution' must be an integer");
        spec.resolution = j["resolution"].get<int>();
    }
    spec.global_dims = list_field<int>(j, "global_dims", {});
    if (const auto patches = j.find("patches"); patches != j.end()) {
        if (!patches->is_array()) throw ParseError("'patches' must be an array");
        for (const auto& p : *patches) {
            try {
                spec.patches.push_back({p.at("m").get<int>(), p.at("n").get<int>()});
            } catch (const json::exception&) {
                throw ParseError("patch settings look like {\"m\": 8, \"n\": 6}");
            }
        }
    }
    spec.stages = list_field<int>(j, "stages", spec.stages);
    spec.flip_probs = list_field<double>(j, "flip_probs", spec.flip_probs);
    spec.noises = list_field<double>(j, "noises", spec.noises);
    if (j.contains("band")) {
        if (!j["band"].is_number_integer()) throw ParseError("'band' must be an integer");
        spec.band = j["band"].get<int>();
    }
    return spec;
}

std::vector<BinaryMask> load_corpus(const SweepSpec& spec) {
    if (!spec.annotations) return synth_corpus(spec.seed, spec.count, spec.resolution);
    const auto set = parse_annotations(read_file(*spec.annotations));
    if (!set.errors.empty())
        throw InputError("annotation " + std::to_string(set.errors.front().index) + ": " +
                         set.errors.front().message);
    if (set.records.empty()) throw InputError("annotation file holds no instances");
    std::vector<BinaryMask> corpus;
    corpus.reserve(set.records.size());
    for (const auto& rec : set.records) corpus.push_back(rasterize(rec, spec.resolution));
    return corpus;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads) {
    validate(spec);
    return run_sweep(spec, load_corpus(spec), threads);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const std::vector<BinaryMask>& corpus,
                                int threads) {
    validate(spec);
    if (corpus.empty()) throw InputError("sweep corpus is empty");
    for (const auto& m : corpus)
        if (m.size() != spec.resolution)
            throw InputError("corpus mask size differs from the sweep resolution");
    if (threads <= 0) threads = thread_limit();
    const int band = spec.band.value_or(default_band_width(spec.resolution));
    const std::size_t n = corpus.size();

    auto evaluate = [&](SweepRow row, const std::function<BinaryMask(std::size_t)>& predict) {
        std::vector<double> ious(n), bious(n);
        parallel_for(n, threads, [&](std::size_t i) {
            const BinaryMask pred = predict(i);
            ious[i] = iou(pred, corpus[i]);
            bious[i] = boundary_iou(pred, corpus[i], band);
        });
        row.count = n;
        row.mean_iou = stable_mean(std::move(ious));
        row.mean_boundary_iou = stable_mean(std::move(bious));
        return row;
    };

    std::vector<SweepRow> rows;
    for (int dim : spec.global_dims) {
        SweepRow row{"global", spec.resolution, dim, {}, 0, 0.0, 0.0, band};
        rows.push_back(evaluate(
            row, [&](std::size_t i) { return global_reencode_baseline(corpus[i], dim); }));
    }
    if (spec.patches.empty()) return rows;

    std::vector<BinaryMask> coarse(n);
    parallel_for(n, threads, [&](std::size_t i) { coarse[i] = coarse_for(corpus[i]); });
    for (const auto& p : spec.patches)
        for (int stages : spec.stages)
            for (double flip : spec.flip_probs)
                for (double noise : spec.noises) {
                    const RefineConfig cfg{p.patch_size, p.patch_dim, stages, flip, noise, spec.seed};
                    SweepRow row{"patch", spec.resolution, 0, p, stages, flip, noise, band};
                    rows.push_back(evaluate(row, [&](std::size_t i) {
                        return oracle_refine(coarse[i], corpus[i], cfg, i).mask;
                    }));
                }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "schema,kind,resolution,global_dim,patch_size,patch_dim,stages,flip_prob,noise,band,count,"
        "mean_iou,mean_boundary_iou\n";
    for (const auto& r : rows) {
        const bool global = r.kind == "global";
        out += std::string(kSweepCsvSchema) + "," + r.kind + "," + std::to_string(r.resolution) +
               "," + (global ? std::to_string(r.global_dim) : "") + "," +
               (global ? "" : std::to_string(r.patch.patch_size)) + "," +
               (global ? "" : std::to_string(r.patch.patch_dim)) + "," +
               (global ? "" : std::to_string(r.stages)) + "," +
               (global ? "" : general(r.flip_prob)) + "," + (global ? "" : general(r.noise)) + "," +
               std::to_string(r.band) + "," + std::to_string(r.count) + "," + fixed(r.mean_iou) +
               "," + fixed(r.mean_boundary_iou) + "\n";
    }
    return out;
}

}  // namespace patchdct
