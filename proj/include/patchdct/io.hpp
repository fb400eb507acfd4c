#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "patchdct/ingest.hpp"
#include "patchdct/mask_codec.hpp"
#include "patchdct/metrics.hpp"
#include "patchdct/patch_codec.hpp"
#include "patchdct/refine.hpp"

namespace patchdct {

enum class PbmFormat { Ascii, Binary };

/// Reads P1 or P4. Only square images are accepted. Throws ParseError.
BinaryMask parse_pbm(std::string_view bytes);
BinaryMask read_pbm(const std::filesystem::path& path);
/// Canonical P1 ("P1\nK K\n" then one line per row, values separated by
/// spaces) or P4.
std::string format_pbm(const BinaryMask& mask, PbmFormat format = PbmFormat::Ascii);
void write_pbm(const std::filesystem::path& path, const BinaryMask& mask,
               PbmFormat format = PbmFormat::Ascii);

/// Binary PPM (P6) with row-major RGB triples.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;
};
std::string format_ppm(const RgbImage& image);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// JSON forms. The from_json functions throw ParseError on schema violations.
nlohmann::json to_json(const DctVector& v);
DctVector dct_vector_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PatchGrid& grid);
PatchGrid patch_grid_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RefineTrace& trace, const RefineConfig& cfg);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const CoefficientStats& stats);

/// Parses text as JSON, converting library errors into ParseError.
nlohmann::json parse_json(std::string_view text);

inline constexpr int kEvalCsvVersion = 1;
std::string eval_csv(const EvalReport& report);

}  // namespace patchdct
