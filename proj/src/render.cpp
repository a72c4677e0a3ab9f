#include "frozenperc/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <zlib.h>

namespace frozenperc {

namespace {

struct Layout {
    int min_x2 = 0;
    int max_y = 0;
    int width = 0;
    int height = 0;
};

Layout layout_of(const SiteIndex& sites, const RenderOptions& o) {
    Layout l;
    if (sites.size() == 0) return l;
    BoundingBox box;
    for (const Coord& v : sites.sites()) box.add(v);
    l.min_x2 = box.min_x2;
    l.max_y = box.max_y;
    l.width = (box.max_x2 - box.min_x2) * o.half_width + 2 * o.half_width;
    l.height = (box.max_y - box.min_y + 1) * o.row_height;
    return l;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>((v >> s) & 0xFF));
}

void put_chunk(std::vector<std::uint8_t>& out, const char* type, const std::vector<std::uint8_t>& data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uLong crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
    put_u32(out, static_cast<std::uint32_t>(crc));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t at) {
    if (at + 4 > in.size()) throw std::runtime_error("truncated PNG");
    return (std::uint32_t{in[at]} << 24) | (std::uint32_t{in[at + 1]} << 16) |
           (std::uint32_t{in[at + 2]} << 8) | std::uint32_t{in[at + 3]};
}

constexpr std::uint8_t kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

}  // namespace

Rgb frozen_color(double t) {
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
    auto lerp = [t](double a, double b) { return static_cast<std::uint8_t>(std::lround(a + (b - a) * t)); };
    return {lerp(8, 158), lerp(29, 202), lerp(88, 245)};
}

std::array<int, 2> site_pixel(const FinalState& final_state, Coord v, const RenderOptions& options) {
    const Layout l = layout_of(*final_state.sites, options);
    const int x2 = 2 * v.x + v.y;
    return {(x2 - l.min_x2) * options.half_width + options.half_width,
            (l.max_y - v.y) * options.row_height + options.row_height / 2};
}

Image rasterize(const FinalState& final_state, const RenderOptions& options) {
    if (options.half_width < 1 || options.row_height < 1) throw std::invalid_argument("bad render block size");
    const SiteIndex& sites = *final_state.sites;
    const Layout l = layout_of(sites, options);
    Image img;
    img.width = l.width;
    img.height = l.height;
    img.pixels.assign(static_cast<std::size_t>(l.width) * l.height, kBackground);

    double t_min = std::numeric_limits<double>::infinity();
    double t_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (final_state.is_frozen(i)) {
            t_min = std::min(t_min, final_state.freeze_time[i]);
            t_max = std::max(t_max, final_state.freeze_time[i]);
        }
    }
    for (std::size_t i = 0; i < sites.size(); ++i) {
        Rgb c = kWhiteSite;
        if (final_state.is_frozen(i)) {
            const double span = t_max - t_min;
            c = frozen_color(span > 0.0 ? (final_state.freeze_time[i] - t_min) / span : 0.5);
        } else if (final_state.state[i] != SiteState::white) {
            c = kBlackSite;
        }
        const Coord v = sites.site(i);
        const int x0 = (2 * v.x + v.y - l.min_x2) * options.half_width;
        const int y0 = (l.max_y - v.y) * options.row_height;
        for (int dy = 0; dy < options.row_height; ++dy) {
            Rgb* row = &img.pixels[static_cast<std::size_t>(y0 + dy) * img.width];
            std::fill(row + x0, row + x0 + 2 * options.half_width, c);
        }
    }
    return img;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<std::size_t>(image.height) * (1 + 3 * image.width));
    for (int y = 0; y < image.height; ++y) {
        raw.push_back(0);  // filter: none
        for (int x = 0; x < image.width; ++x) {
            const Rgb c = image.at(x, y);
            raw.insert(raw.end(), {c.r, c.g, c.b});
        }
    }
    uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> packed(packed_size);
    if (compress2(packed.data(), &packed_size, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK) {
        throw std::runtime_error("PNG compression failed");
    }
    packed.resize(packed_size);

    std::vector<std::uint8_t> out(std::begin(kSignature), std::end(kSignature));
    std::vector<std::uint8_t> header;
    put_u32(header, static_cast<std::uint32_t>(image.width));
    put_u32(header, static_cast<std::uint32_t>(image.height));
    header.insert(header.end(), {8, 2, 0, 0, 0});  // 8-bit RGB, no interlace
    put_chunk(out, "IHDR", header);
    put_chunk(out, "IDAT", packed);
    put_chunk(out, "IEND", {});
    return out;
}

Image decode_png(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0) {
        throw std::runtime_error("not a PNG file");
    }
    Image img;
    std::vector<std::uint8_t> packed;
    std::size_t at = 8;
    while (at + 8 <= bytes.size()) {
        const std::uint32_t len = get_u32(bytes, at);
        const std::string type(reinterpret_cast<const char*>(&bytes[at + 4]), 4);
        if (at + 12 + len > bytes.size()) throw std::runtime_error("truncated PNG chunk");
        const std::uint8_t* data = &bytes[at + 8];
        if (type == "IHDR") {
            img.width = static_cast<int>(get_u32(bytes, at + 8));
            img.height = static_cast<int>(get_u32(bytes, at + 12));
            if (data[8] != 8 || data[9] != 2 || data[12] != 0) {
                throw std::runtime_error("only 8-bit RGB non-interlaced PNG is supported");
            }
        } else if (type == "IDAT") {
            packed.insert(packed.end(), data, data + len);
        } else if (type == "IEND") {
            break;
        }
        at += 12 + len;
    }
    const std::size_t stride = 1 + 3 * static_cast<std::size_t>(img.width);
    std::vector<std::uint8_t> raw(stride * img.height);
    uLongf raw_size = raw.size();
    if (uncompress(raw.data(), &raw_size, packed.data(), static_cast<uLong>(packed.size())) != Z_OK ||
        raw_size != raw.size()) {
        throw std::runtime_error("PNG decompression failed");
    }
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    for (int y = 0; y < img.height; ++y) {
        const std::uint8_t* row = &raw[y * stride];
        if (row[0] != 0) throw std::runtime_error("only unfiltered PNG rows are supported");
        for (int x = 0; x < img.width; ++x) {
            img.pixels[static_cast<std::size_t>(y) * img.width + x] = {row[1 + 3 * x], row[2 + 3 * x],
                                                                       row[3 + 3 * x]};
        }
    }
    return img;
}

void render(const FinalState& final_state, const std::string& path, const RenderOptions& options) {
    const auto bytes = encode_png(rasterize(final_state, options));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace frozenperc
