// image.hpp : grayscale image container and basic geometry ops
#pragma once

#include <cstdint>
#include <vector>

namespace quest {

/// 8-bit grayscale image, row-major. Coordinates are (x, y) with x the column
/// and y the row; (0, 0) is the top-left pixel.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // width * height intensities

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0);

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const GrayImage&) const = default;
};

/// Axis-aligned region, top-left (x, y), extent w x h.
struct BoundingBox {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool operator==(const BoundingBox&) const = default;
};

/// BT.601 luma: round(0.299 r + 0.587 g + 0.114 b), half-up.
std::uint8_t to_grayscale(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Sub-image copy; the box must lie entirely inside the image.
GrayImage crop(const GrayImage& img, const BoundingBox& box);

/// Bilinear resampling with pixel-center coordinate mapping. Resizing to the
/// source dimensions reproduces the input exactly.
GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h);

}  // namespace quest
