// patchdct: command-line front end for the mask codecs, oracle refinement,
// metrics and sweep harness.
//
// Exit codes: 0 success, 1 bad input or arguments, 2 internal invariant
// violation.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "patchdct/error.hpp"
#include "patchdct/ingest.hpp"
#include "patchdct/io.hpp"
#include "patchdct/mask_codec.hpp"
#include "patchdct/metrics.hpp"
#include "patchdct/patch_codec.hpp"
#include "patchdct/refine.hpp"
#include "patchdct/sweep.hpp"

namespace fs = std::filesystem;
using namespace patchdct;
using nlohmann::json;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

void emit(const std::optional<std::string>& out, const std::string& text) {
    if (out) write_file(*out, text);
    else std::cout << text;
}

PbmFormat pbm_format(bool binary) { return binary ? PbmFormat::Binary : PbmFormat::Ascii; }

struct CorpusArgs {
    std::optional<std::string> annotations;
    std::uint64_t seed = 0;
    int count = 100;
    int resolution = kDefaultPatchResolution;

    void add(CLI::App* cmd) {
        cmd->add_option("--annotations", annotations, "COCO-style annotation file")
            ->check(CLI::ExistingFile);
        cmd->add_option("--seed", seed, "Seed for the synthetic corpus and corruption");
        cmd->add_option("--count", count, "Synthetic corpus size")->check(CLI::PositiveNumber);
        cmd->add_option("--resolution", resolution, "Mask resolution K")
            ->check(CLI::PositiveNumber);
    }

    SweepSpec spec() const {
        SweepSpec s;
        if (annotations) s.annotations = fs::path(*annotations);
        s.seed = seed;
        s.count = count;
        s.resolution = resolution;
        return s;
    }
};

// encode ----------------------------------------------------------------

struct EncodeArgs {
    std::string in;
    std::optional<std::string> out;
    std::optional<int> resolution;
    std::optional<int> dim;
    std::optional<int> patch_size;
    int patch_dim = kDefaultPatchDim;
};

int run_encode(const EncodeArgs& a) {
    BinaryMask mask = read_pbm(a.in);
    if (a.resolution) mask = resize_mask(mask, *a.resolution);
    json doc;
    if (a.patch_size) {
        doc = to_json(build_grid(mask, *a.patch_size, a.patch_dim));
    } else {
        const long full = static_cast<long>(mask.size()) * mask.size();
        const int dim = a.dim.value_or(static_cast<int>(std::min<long>(kDefaultGlobalDim, full)));
        doc = to_json(encode_mask(mask, dim));
    }
    emit(a.out, doc.dump() + "\n");
    return 0;
}

// decode ----------------------------------------------------------------

int run_decode(const std::string& in, const std::string& out, bool binary) {
    const json doc = parse_json(read_file(in));
    BinaryMask mask;
    if (doc.is_object() && doc.contains("patches")) mask = assemble(patch_grid_from_json(doc));
    else mask = decode_mask(dct_vector_from_json(doc));
    write_pbm(out, mask, pbm_format(binary));
    return 0;
}

// refine ----------------------------------------------------------------

struct RefineArgs {
    std::string truth;
    std::optional<std::string> coarse;
    std::string out;
    std::optional<std::string> trace;
    RefineConfig cfg;
    bool binary = false;
};

int run_refine(const RefineArgs& a) {
    const BinaryMask truth = read_pbm(a.truth);
    const BinaryMask coarse = a.coarse ? read_pbm(*a.coarse) : BinaryMask(truth.size());
    const auto result = oracle_refine(coarse, truth, a.cfg);
    for (const auto& st : result.trace.stages)
        if (st.iou != iou(st.output, truth)) throw InvariantError("trace IoU does not match output");
    write_pbm(a.out, result.mask, pbm_format(a.binary));
    if (a.trace) write_file(*a.trace, to_json(result.trace, a.cfg).dump(2) + "\n");
    std::cout << "iou " << result.trace.stages.back().iou << "\n";
    return 0;
}

// sweep -----------------------------------------------------------------

struct SweepArgs {
    std::optional<std::string> spec_file;
    CorpusArgs corpus;
    std::vector<int> dims;
    std::vector<int> patch_sizes;
    std::vector<int> patch_dims;
    std::vector<int> stages;
    std::vector<double> flip_probs;
    std::vector<double> noises;
    std::optional<int> band;
    std::optional<std::string> out;
};

int run_sweep_cmd(const SweepArgs& a) {
    SweepSpec spec;
    if (a.spec_file) {
        const fs::path path(*a.spec_file);
        spec = sweep_spec_from_json(parse_json(read_file(path)), path.parent_path());
    } else {
        spec = a.corpus.spec();
        spec.global_dims = a.dims;
        if (a.patch_sizes.size() != a.patch_dims.size())
            throw InputError("--patch-size and --patch-dim must be given the same number of times");
        for (std::size_t i = 0; i < a.patch_sizes.size(); ++i)
            spec.patches.push_back({a.patch_sizes[i], a.patch_dims[i]});
        if (!a.stages.empty()) spec.stages = a.stages;
        if (!a.flip_probs.empty()) spec.flip_probs = a.flip_probs;
        if (!a.noises.empty()) spec.noises = a.noises;
        spec.band = a.band;
    }
    // Render everything before touching the output so a failure leaves no
    // partial report behind.
    const std::string csv = sweep_csv(run_sweep(spec));
    emit(a.out, csv);
    return 0;
}

// eval ------------------------------------------------------------------

int run_eval(const std::vector<std::string>& pred, const std::vector<std::string>& truth,
             std::optional<int> band, const std::string& out) {
    if (pred.empty()) throw InputError("no mask pairs given");
    if (pred.size() != truth.size())
        throw InputError("got " + std::to_string(pred.size()) + " predictions but " +
                         std::to_string(truth.size()) + " ground-truth masks");
    std::vector<EvalRow> rows;
    int resolution = 0;
    int d = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const BinaryMask p = read_pbm(pred[i]);
        const BinaryMask t = read_pbm(truth[i]);
        if (i == 0) {
            resolution = t.size();
            d = band.value_or(default_band_width(resolution));
        }
        rows.push_back({i, fs::path(pred[i]).filename().string(), iou(p, t), boundary_iou(p, t, d)});
    }
    SweepKey key;
    key.resolution = resolution;
    key.band = d;
    const EvalReport report = aggregate(std::move(rows), key);
    write_file(out + ".csv", eval_csv(report));
    write_file(out + ".json", to_json(report).dump(2) + "\n");
    std::cout << "count " << report.count << " mean_iou " << report.mean_iou
              << " mean_boundary_iou " << report.mean_boundary_iou << "\n";
    return 0;
}

// stats -----------------------------------------------------------------

int run_stats(const CorpusArgs& corpus, int patch_size, int patch_dim, int bins,
              const std::optional<std::string>& out) {
    const auto masks = load_corpus(corpus.spec());
    const auto stats = coefficient_stats(masks, patch_size, patch_dim, bins);
    const long total = stats.patch_counts[0] + stats.patch_counts[1] + stats.patch_counts[2];
    const long expected = static_cast<long>(masks.size()) * (corpus.resolution / patch_size) *
                          (corpus.resolution / patch_size);
    if (total != expected) throw InvariantError("patch classes do not cover the corpus");
    emit(out, to_json(stats).dump(2) + "\n");
    return 0;
}

// synth -----------------------------------------------------------------

int run_synth(std::uint64_t seed, int count, int resolution, const std::string& dir,
              bool binary) {
    fs::create_directories(dir);
    const auto masks = synth_corpus(seed, count, resolution);
    json entries = json::array();
    for (std::size_t i = 0; i < masks.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "mask_%04zu.pbm", i);
        write_pbm(fs::path(dir) / name, masks[i], pbm_format(binary));
        entries.push_back({{"index", i}, {"file", name}, {"digest", mask_digest(masks[i])}});
    }
    const json manifest{{"seed", seed}, {"count", count}, {"resolution", resolution},
                        {"masks", std::move(entries)}};
    write_file(fs::path(dir) / "manifest.json", manifest.dump(2) + "\n");
    return 0;
}

// overlay ---------------------------------------------------------------

int run_overlay(const std::string& mask_path, const std::string& truth_path,
                const std::string& out) {
    const BinaryMask mask = read_pbm(mask_path);
    const BinaryMask truth = read_pbm(truth_path);
    const Confusion c = confusion(mask, truth);  // also rejects size mismatch
    RgbImage img{mask.size(), mask.size(), {}};
    img.rgb.reserve(static_cast<std::size_t>(mask.size()) * mask.size() * 3);
    for (std::size_t i = 0; i < mask.values().size(); ++i) {
        const bool p = mask.values()[i], t = truth.values()[i];
        std::array<std::uint8_t, 3> px{0, 0, 0};        // true negative
        if (p && t) px = {255, 255, 255};               // true positive
        else if (p) px = {255, 0, 0};                   // false positive
        else if (t) px = {0, 0, 255};                   // false negative
        img.rgb.insert(img.rgb.end(), px.begin(), px.end());
    }
    write_file(out, format_ppm(img));
    std::cout << "tp " << c.true_positive << " fp " << c.false_positive << " fn "
              << c.false_negative << " tn " << c.true_negative << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PatchDCT mask coding, oracle refinement and evaluation"};
    app.require_subcommand(1);

    EncodeArgs enc;
    auto* encode = app.add_subcommand("encode", "Encode a PBM mask into a DCT vector or patch grid");
    encode->add_option("--in", enc.in, "Input PBM")->required()->check(CLI::ExistingFile);
    encode->add_option("--out", enc.out, "Output JSON (stdout if omitted)");
    encode->add_option("--resolution", enc.resolution, "Resize the mask to K first");
    encode->add_option("--dim", enc.dim, "Global vector length N");
    encode->add_option("--patch-size", enc.patch_size, "Emit a patch grid with this patch size");
    encode->add_option("--patch-dim", enc.patch_dim, "Patch vector length n");

    std::string dec_in, dec_out;
    bool dec_binary = false;
    auto* decode = app.add_subcommand("decode", "Decode a DCT vector or patch grid JSON to PBM");
    decode->add_option("--in", dec_in, "Input JSON")->required()->check(CLI::ExistingFile);
    decode->add_option("--out", dec_out, "Output PBM")->required();
    decode->add_flag("--binary", dec_binary, "Write P4 instead of P1");

    RefineArgs ref;
    auto* refine = app.add_subcommand("refine", "Oracle PatchDCT refinement of one mask");
    refine->add_option("--truth", ref.truth, "Ground-truth PBM")->required()->check(CLI::ExistingFile);
    refine->add_option("--coarse", ref.coarse, "Coarse input PBM")->check(CLI::ExistingFile);
    refine->add_option("--out", ref.out, "Refined PBM")->required();
    refine->add_option("--trace", ref.trace, "Per-stage trace JSON");
    refine->add_option("--patch-size", ref.cfg.patch_size, "Patch size m");
    refine->add_option("--patch-dim", ref.cfg.patch_dim, "Patch vector length n");
    refine->add_option("--stages", ref.cfg.stages, "Refinement stages");
    refine->add_option("--flip-prob", ref.cfg.flip_prob, "Class flip probability");
    refine->add_option("--noise", ref.cfg.noise, "Coefficient noise sigma");
    refine->add_option("--seed", ref.cfg.seed, "RNG seed");
    refine->add_flag("--binary", ref.binary, "Write P4 instead of P1");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Corpus sweep over codec configurations (CSV)");
    sweep->add_option("--spec", sw.spec_file, "Sweep spec JSON (overrides other flags)")
        ->check(CLI::ExistingFile);
    sw.corpus.add(sweep);
    sweep->add_option("--dim", sw.dims, "Global vector lengths");
    sweep->add_option("--patch-size", sw.patch_sizes, "Patch sizes, paired with --patch-dim");
    sweep->add_option("--patch-dim", sw.patch_dims, "Patch vector lengths");
    sweep->add_option("--stages", sw.stages, "Stage counts");
    sweep->add_option("--flip-prob", sw.flip_probs, "Class flip probabilities");
    sweep->add_option("--noise", sw.noises, "Coefficient noise levels");
    sweep->add_option("--band", sw.band, "Boundary band width in pixels");
    sweep->add_option("--out", sw.out, "Output CSV (stdout if omitted)");

    std::vector<std::string> ev_pred, ev_truth;
    std::optional<int> ev_band;
    std::string ev_out;
    auto* eval = app.add_subcommand("eval", "IoU and boundary IoU over mask pairs");
    eval->add_option("--pred", ev_pred, "Predicted PBMs")->required();
    eval->add_option("--truth", ev_truth, "Ground-truth PBMs, same order")->required();
    eval->add_option("--band", ev_band, "Boundary band width in pixels");
    eval->add_option("--out", ev_out, "Report prefix (writes .csv and .json)")->required();

    CorpusArgs st_corpus;
    int st_patch_size = kDefaultPatchSize, st_patch_dim = kDefaultPatchDim, st_bins = 64;
    std::optional<std::string> st_out;
    auto* stats = app.add_subcommand("stats", "Per-class patch coefficient histograms (JSON)");
    st_corpus.add(stats);
    stats->add_option("--patch-size", st_patch_size, "Patch size m");
    stats->add_option("--patch-dim", st_patch_dim, "Coefficients per patch");
    stats->add_option("--bins", st_bins, "Histogram bins")->check(CLI::PositiveNumber);
    stats->add_option("--out", st_out, "Output JSON (stdout if omitted)");

    std::uint64_t sy_seed = 0;
    int sy_count = 100, sy_resolution = kDefaultPatchResolution;
    std::string sy_out;
    bool sy_binary = false;
    auto* synth = app.add_subcommand("synth", "Write a seeded synthetic corpus and manifest");
    synth->add_option("--seed", sy_seed, "Corpus seed");
    synth->add_option("--count", sy_count, "Number of masks")->check(CLI::PositiveNumber);
    synth->add_option("--resolution", sy_resolution, "Mask size K")->check(CLI::PositiveNumber);
    synth->add_option("--out", sy_out, "Output directory")->required();
    synth->add_flag("--binary", sy_binary, "Write P4 instead of P1");

    std::string ov_mask, ov_truth, ov_out;
    auto* overlay = app.add_subcommand("overlay", "Color TP/FP/FN pixels into a PPM");
    overlay->add_option("--mask", ov_mask, "Predicted PBM")->required()->check(CLI::ExistingFile);
    overlay->add_option("--truth", ov_truth, "Ground-truth PBM")->required()->check(CLI::ExistingFile);
    overlay->add_option("--out", ov_out, "Output PPM")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "patchdct: error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (*encode) return run_encode(enc);
        if (*decode) return run_decode(dec_in, dec_out, dec_binary);
        if (*refine) return run_refine(ref);
        if (*sweep) return run_sweep_cmd(sw);
        if (*eval) return run_eval(ev_pred, ev_truth, ev_band, ev_out);
        if (*stats) return run_stats(st_corpus, st_patch_size, st_patch_dim, st_bins, st_out);
        if (*synth) return run_synth(sy_seed, sy_count, sy_resolution, sy_out, sy_binary);
        if (*overlay) return run_overlay(ov_mask, ov_truth, ov_out);
    } catch (const InputError& e) {
        std::cerr << "patchdct: error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "patchdct: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
