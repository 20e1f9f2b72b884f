#include "quest/image.hpp"

#include <cmath>
#include <sstream>

#include "quest/error.hpp"

namespace quest {

GrayImage::GrayImage(int w, int h, std::uint8_t fill) : width(w), height(h) {
    if (w < 1 || h < 1) {
        std::ostringstream msg;
        msg << "image dimensions must be positive, got " << w << "x" << h;
        throw ArgumentError(msg.str());
    }
    data.assign(static_cast<std::size_t>(w) * h, fill);
}

std::uint8_t to_grayscale(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const double luma = 0.299 * r + 0.587 * g + 0.114 * b;
    return static_cast<std::uint8_t>(std::floor(luma + 0.5));
}

GrayImage crop(const GrayImage& img, const BoundingBox& box) {
    if (box.w < 1 || box.h < 1) {
        throw ArgumentError("crop box must have positive extent");
    }
    std::ostringstream msg;
    if (box.x < 0) {
        msg << "crop box left edge " << box.x << " is negative";
        throw RangeError(msg.str());
    }
    if (box.y < 0) {
        msg << "crop box top edge " << box.y << " is negative";
        throw RangeError(msg.str());
    }
    if (box.x + box.w > img.width) {
        msg << "crop box right edge " << box.x + box.w << " exceeds image width " << img.width;
        throw RangeError(msg.str());
    }
    if (box.y + box.h > img.height) {
        msg << "crop box bottom edge " << box.y + box.h << " exceeds image height " << img.height;
        throw RangeError(msg.str());
    }

    GrayImage out(box.w, box.h);
    for (int y = 0; y < box.h; ++y) {
        const std::uint8_t* src = &img.data[static_cast<std::size_t>(box.y + y) * img.width + box.x];
        std::uint8_t* dst = &out.data[static_cast<std::size_t>(y) * box.w];
        std::copy(src, src + box.w, dst);
    }
    return out;
}

GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) {
        throw ArgumentError("resize dimensions must be positive");
    }
    if (out_w == img.width && out_h == img.height) {
        return img;
    }

    GrayImage out(out_w, out_h);
    const double scale_x = static_cast<double>(img.width) / out_w;
    const double scale_y = static_cast<double>(img.height) / out_h;

    for (int oy = 0; oy < out_h; ++oy) {
        // Pixel-center mapping, clamped to the source sample range.
        double sy = (oy + 0.5) * scale_y - 0.5;
        if (sy < 0.0) sy = 0.0;
        if (sy > img.height - 1) sy = img.height - 1;
        const int y0 = static_cast<int>(sy);
        const int y1 = y0 + 1 < img.height ? y0 + 1 : y0;
        const double fy = sy - y0;

        for (int ox = 0; ox < out_w; ++ox) {
            double sx = (ox + 0.5) * scale_x - 0.5;
            if (sx < 0.0) sx = 0.0;
            if (sx > img.width - 1) sx = img.width - 1;
            const int x0 = static_cast<int>(sx);
            const int x1 = x0 + 1 < img.width ? x0 + 1 : x0;
            const double fx = sx - x0;

            const double top = (1.0 - fx) * img.at(x0, y0) + fx * img.at(x1, y0);
            const double bottom = (1.0 - fx) * img.at(x0, y1) + fx * img.at(x1, y1);
            const double value = (1.0 - fy) * top + fy * bottom;

            double rounded = std::floor(value + 0.5);
            if (rounded < 0.0) rounded = 0.0;
            if (rounded > 255.0) rounded = 255.0;
            out.at(ox, oy) = static_cast<std::uint8_t>(rounded);
        }
    }
    return out;
}

}  // namespace quest
