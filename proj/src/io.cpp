#include "patchdct/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "patchdct/error.hpp"

namespace patchdct {
namespace {

using nlohmann::json;

class PbmReader {
public:
    explicit PbmReader(std::string_view bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                return;
            }
        }
    }

    int integer() {
        skip_space_and_comments();
        const std::size_t start = pos_;
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1 << 20) throw ParseError("PBM dimension too large");
            ++pos_;
        }
        if (pos_ == start) throw ParseError("PBM: expected a number at byte " + std::to_string(pos_));
        return static_cast<int>(value);
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

std::string row_string(const BinaryMask& mask, int r) {
    std::string s(mask.size(), '0');
    for (int c = 0; c < mask.size(); ++c) s[c] = mask(r, c) ? '1' : '0';
    return s;
}

json mask_rows(const BinaryMask& mask) {
    json rows = json::array();
    for (int r = 0; r < mask.size(); ++r) rows.push_back(row_string(mask, r));
    return rows;
}

json key_json(const SweepKey& key) {
    json j{{"resolution", key.resolution}, {"band", key.band}};
    auto put = [&j](const char* name, const auto& opt) {
        j[name] = opt ? json(*opt) : json(nullptr);
    };
    put("global_dim", key.global_dim);
    put("patch_size", key.patch_size);
    put("patch_dim", key.patch_dim);
    put("stages", key.stages);
    put("flip_prob", key.flip_prob);
    put("noise", key.noise);
    return j;
}

template <typename T>
T field(const json& j, const char* name) {
    const auto it = j.find(name);
    if (it == j.end()) throw ParseError(std::string("missing field '") + name + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("field '") + name + "' has the wrong type");
    }
}

std::vector<double> coeff_array(const json& j) {
    const auto it = j.find("coeffs");
    if (it == j.end() || !it->is_array()) throw ParseError("missing 'coeffs' array");
    std::vector<double> out;
    out.reserve(it->size());
    for (const auto& v : *it) {
        if (!v.is_number()) throw ParseError("coefficients must be numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string fixed(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

BinaryMask parse_pbm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '1' && bytes[1] != '4'))
        throw ParseError("not a PBM (expected P1 or P4 magic)");
    const bool binary = bytes[1] == '4';
    PbmReader in(bytes);
    in.pos_ = 2;
    const int width = in.integer();
    const int height = in.integer();
    if (width < 1 || height < 1) throw ParseError("PBM dimensions must be positive");
    if (width != height)
        throw ParseError("masks must be square, got " + std::to_string(width) + "x" +
                         std::to_string(height));
    const int k = width;
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(k) * k);

    if (binary) {
        if (in.pos_ >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[in.pos_])))
            throw ParseError("P4 header must end with a single whitespace byte");
        ++in.pos_;
        const std::size_t stride = (static_cast<std::size_t>(k) + 7) / 8;
        if (bytes.size() - in.pos_ < stride * k) throw ParseError("P4 raster is truncated");
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) {
                const auto byte = static_cast<unsigned char>(bytes[in.pos_ + r * stride + c / 8]);
                labels[static_cast<std::size_t>(r) * k + c] = (byte >> (7 - c % 8)) & 1;
            }
    } else {
        for (auto& label : labels) {
            in.skip_space_and_comments();
            if (in.pos_ >= bytes.size()) throw ParseError("P1 raster is truncated");
            const char ch = bytes[in.pos_++];
            if (ch != '0' && ch != '1')
                throw ParseError("P1 raster: unexpected byte at " + std::to_string(in.pos_ - 1));
            label = ch == '1';
        }
    }
    return BinaryMask(k, std::move(labels));
}

BinaryMask read_pbm(const std::filesystem::path& path) { return parse_pbm(read_file(path)); }

std::string format_pbm(const BinaryMask& mask, PbmFormat format) {
    const int k = mask.size();
    std::string out = (format == PbmFormat::Ascii ? "P1\n" : "P4\n") + std::to_string(k) + " " +
                      std::to_string(k) + "\n";
    if (format == PbmFormat::Ascii) {
        for (int r = 0; r < k; ++r) {
            for (int c = 0; c < k; ++c) {
                if (c) out += ' ';
                out += mask(r, c) ? '1' : '0';
            }
            out += '\n';
        }
        return out;
    }
    const std::size_t stride = (static_cast<std::size_t>(k) + 7) / 8;
    for (int r = 0; r < k; ++r) {
        std::string row(stride, '\0');
        for (int c = 0; c < k; ++c)
            if (mask(r, c)) row[c / 8] = static_cast<char>(row[c / 8] | (0x80 >> (c % 8)));
        out += row;
    }
    return out;
}

void write_pbm(const std::filesystem::path& path, const BinaryMask& mask, PbmFormat format) {
    write_file(path, format_pbm(mask, format));
}

std::string format_ppm(const RgbImage& image) {
    std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                      "\n255\n";
    out.append(image.rgb.begin(), image.rgb.end());
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw InputError("failed writing " + path.string());
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("malformed JSON at byte " + std::to_string(e.byte));
    }
}

json to_json(const DctVector& v) {
    return {{"resolution", v.resolution}, {"dim", v.dim()}, {"coeffs", v.coeffs}};
}

DctVector dct_vector_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("encoded mask must be a JSON object");
    DctVector v{field<int>(j, "resolution"), coeff_array(j)};
    if (field<int>(j, "dim") != v.dim())
        throw ParseError("'dim' does not match the number of coefficients");
    try {
        validate(v);
    } catch (const InputError& e) {
        throw ParseError(e.what());
    }
    return v;
}

json to_json(const PatchGrid& grid) {
    json patches = json::array();
    for (const auto& p : grid.patches) {
        json rec{{"class", std::string(to_string(p.cls))}};
        if (p.vector) rec["coeffs"] = p.vector->coeffs;
        patches.push_back(std::move(rec));
    }
    return {{"K", grid.mask_size}, {"m", grid.patch_size}, {"n", grid.patch_dim},
            {"patches", std::move(patches)}};
}

PatchGrid patch_grid_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("patch grid must be a JSON object");
    PatchGrid grid{field<int>(j, "K"), field<int>(j, "m"), field<int>(j, "n"), {}};
    const auto patches = j.find("patches");
    if (patches == j.end() || !patches->is_array()) throw ParseError("missing 'patches' array");
    for (const auto& p : *patches) {
        if (!p.is_object()) throw ParseError("patch record must be an object");
        PatchRecord rec{patch_class_from_string(field<std::string>(p, "class")), std::nullopt};
        if (p.contains("coeffs")) rec.vector = DctVector{grid.patch_size, coeff_array(p)};
        grid.patches.push_back(std::move(rec));
    }
    try {
        validate(grid);
    } catch (const InputError& e) {
        throw ParseError(e.what());
    }
    return grid;
}

json to_json(const RefineTrace& trace, const RefineConfig& cfg) {
    json stages = json::array();
    for (std::size_t s = 0; s < trace.stages.size(); ++s) {
        const auto& st = trace.stages[s];
        stages.push_back({{"stage", s + 1},
                          {"iou", st.iou},
                          {"mixed_patches", st.grid.mixed_count()},
                          {"input", mask_rows(st.input)},
                          {"grid", to_json(st.grid)},
                          {"output", mask_rows(st.output)}});
    }
    return {{"config",
             {{"patch_size", cfg.patch_size},
              {"patch_dim", cfg.patch_dim},
              {"stages", cfg.stages},
              {"flip_prob", cfg.flip_prob},
              {"noise", cfg.noise},
              {"seed", cfg.seed}}},
            {"stages", std::move(stages)}};
}

json to_json(const EvalReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"index", r.index},
                        {"name", r.name},
                        {"iou", r.iou},
                        {"boundary_iou", r.boundary_iou}});
    return {{"schema", "patchdct-eval-v" + std::to_string(kEvalCsvVersion)},
            {"count", report.count},
            {"mean_iou", report.mean_iou},
            {"min_iou", report.min_iou},
            {"max_iou", report.max_iou},
            {"mean_boundary_iou", report.mean_boundary_iou},
            {"min_boundary_iou", report.min_boundary_iou},
            {"max_boundary_iou", report.max_boundary_iou},
            {"key", key_json(report.key)},
            {"rows", std::move(rows)}};
}

json to_json(const CoefficientStats& stats) {
    json classes = json::object();
    for (auto cls : {PatchClass::Foreground, PatchClass::Background, PatchClass::Mixed}) {
        json positions = json::array();
        for (const auto& h : stats.of(cls))
            positions.push_back({{"samples", h.samples},
                                 {"min", h.min},
                                 {"max", h.max},
                                 {"mean", h.mean},
                                 {"lo", h.lo},
                                 {"hi", h.hi},
                                 {"bins", h.bins}});
        classes[std::string(to_string(cls))] = {
            {"patches", stats.patch_counts[static_cast<int>(cls)]},
            {"positions", std::move(positions)}};
    }
    return {{"patch_size", stats.patch_size},
            {"patch_dim", stats.patch_dim},
            {"bin_count", stats.bin_count},
            {"classes", std::move(classes)}};
}

std::string eval_csv(const EvalReport& report) {
    const std::string schema = "patchdct-eval-v" + std::to_string(kEvalCsvVersion);
    std::string out = "schema,index,name,iou,boundary_iou\n";
    for (const auto& r : report.rows)
        out += schema + "," + std::to_string(r.index) + "," + csv_field(r.name) + "," +
               fixed(r.iou, 9) + "," + fixed(r.boundary_iou, 9) + "\n";
    return out;
}

}  // namespace patchdct
