// Raster rendering of a final configuration in the style of the classic
// frozen-percolation pictures: frozen sites on a dark-to-light blue ramp by
// freeze time (lighter = later), black non-frozen sites red, white sites white.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "frozenperc/frozen.hpp"

namespace frozenperc {

struct Rgb {
    std::uint8_t r, g, b;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kWhiteSite{255, 255, 255};
inline constexpr Rgb kBlackSite{214, 39, 40};     // red: occupied, not frozen
inline constexpr Rgb kBackground{128, 128, 128};  // outside the domain

/// Blue ramp for a normalized freeze time in [0, 1].
Rgb frozen_color(double t);

struct Image {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;  // row-major, top row first

    Rgb at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct RenderOptions {
    int half_width = 3;  // a site covers 2*half_width x row_height pixels
    int row_height = 5;  // ~ sqrt(3) * half_width keeps the embedding's aspect
};

/// Each site is a block centered at its embedded position. Freeze times are
/// normalized over the frozen sites of the picture.
Image rasterize(const FinalState& final_state, const RenderOptions& options = {});

/// Pixel at the center of a site's block.
std::array<int, 2> site_pixel(const FinalState& final_state, Coord v, const RenderOptions& options = {});

std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_png(const std::vector<std::uint8_t>& bytes);

/// Throws std::runtime_error when the path cannot be written.
void render(const FinalState& final_state, const std::string& path, const RenderOptions& options = {});

}  // namespace frozenperc
