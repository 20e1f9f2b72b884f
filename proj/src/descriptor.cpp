#include "quest/descriptor.hpp"

#include <sstream>

#include "quest/error.hpp"

namespace quest {

namespace {

// Flat offsets of I_0..I_7 relative to the center pixel, for a given row stride.
std::array<std::ptrdiff_t, 8> ring_offsets(int stride) {
    return {+1, +1 - stride, -stride, -1 - stride, -1, -1 + stride, +stride, +1 + stride};
}

int floored_mod8(int v) { return ((v % 8) + 8) % 8; }

// Index pair and divisor of Q_{v,omega}; fixed per (v, omega), so encoders
// resolve them once per configuration instead of per pixel.
struct QuadTap {
    int a;        // (2v - omega + psi(v)) mod 8
    int b;        // 2(v - omega + 1) mod 8
    int divisor;  // psi(v)/3 + 2
};

QuadTap quad_tap(int v, int omega) {
    return {floored_mod8(2 * v - omega + psi(v)),
            floored_mod8(2 * (v - omega + 1)),
            psi(v) / 3 + 2};
}

std::array<QuadTap, 6> resolve_taps(const QuestConfig& cfg) {
    std::array<QuadTap, 6> taps;
    for (int v = 0; v < 6; ++v) taps[v] = quad_tap(v, cfg.omega(v));
    return taps;
}

void require_encodable(const GrayImage& img) {
    if (img.width < 3 || img.height < 3) {
        std::ostringstream msg;
        msg << "image must be at least 3x3 to encode, got " << img.width << "x" << img.height;
        throw SizeError(msg.str());
    }
}

}  // namespace

std::string descriptor_name(DescriptorId id) {
    return id == DescriptorId::kQuest ? "quest" : "lbp";
}

DescriptorId descriptor_from_name(const std::string& name) {
    if (name == "quest") return DescriptorId::kQuest;
    if (name == "lbp") return DescriptorId::kLbp;
    throw ConfigError("unknown descriptor \"" + name + "\" (expected quest or lbp)");
}

std::string quad_assignment_name(QuadAssignment qa) {
    switch (qa) {
        case QuadAssignment::kV3: return "v3";
        case QuadAssignment::kV4: return "v4";
        case QuadAssignment::kAlt: return "alt";
    }
    return "v3";
}

QuadAssignment quad_assignment_from_name(const std::string& name) {
    if (name == "v3") return QuadAssignment::kV3;
    if (name == "v4") return QuadAssignment::kV4;
    if (name == "alt") return QuadAssignment::kAlt;
    throw ConfigError("unknown quad assignment \"" + name + "\" (expected v3, v4 or alt)");
}

int QuestConfig::omega(int v) const {
    switch (quad_assignment) {
        case QuadAssignment::kV3: return v / 3;
        case QuadAssignment::kV4: return v / 4;
        case QuadAssignment::kAlt: return v % 2;
    }
    return 0;
}

int psi(int eta, int p) {
    return (eta / 4) * (p - 2);
}

std::array<std::uint8_t, 8> ring_neighbors(const std::array<std::uint8_t, 9>& patch) {
    // patch is row-major: 0 1 2 / 3 4 5 / 6 7 8, center at 4
    return {patch[5], patch[2], patch[1], patch[0], patch[3], patch[6], patch[7], patch[8]};
}

double quad_sample(const std::array<std::uint8_t, 8>& neighbors, int v, int omega) {
    const QuadTap tap = quad_tap(v, omega);
    return (static_cast<double>(neighbors[tap.a]) + neighbors[tap.b]) / tap.divisor;
}

int quest_encode_pixel(const std::array<std::uint8_t, 9>& patch, const QuestConfig& cfg) {
    const std::array<std::uint8_t, 8> ring = ring_neighbors(patch);
    const int center = patch[4];
    int code = 0;
    for (int v = 0; v < 6; ++v) {
        if (quad_sample(ring, v, cfg.omega(v)) - center >= 0.0) {
            code |= 1 << v;
        }
    }
    return code;
}

int lbp_encode_pixel(const std::array<std::uint8_t, 9>& patch) {
    const std::array<std::uint8_t, 8> ring = ring_neighbors(patch);
    const int center = patch[4];
    int code = 0;
    for (int k = 0; k < 8; ++k) {
        if (ring[k] >= center) {
            code |= 1 << k;
        }
    }
    return code;
}

CodeMap quest_encode_map(const GrayImage& img, const QuestConfig& cfg) {
    require_encodable(img);

    CodeMap map;
    map.width = img.width - 2;
    map.height = img.height - 2;
    map.code_range = 64;
    map.descriptor_id = DescriptorId::kQuest;
    map.codes.resize(static_cast<std::size_t>(map.width) * map.height);

    const std::array<QuadTap, 6> taps = resolve_taps(cfg);
    const std::array<std::ptrdiff_t, 8> offs = ring_offsets(img.width);

    // (I_a + I_b) / d >= I_c  <=>  I_a + I_b >= d * I_c  with d > 0, so the
    // whole comparison runs in integers; quad_sample's real value is exact.
    for (int y = 0; y < map.height; ++y) {
        const std::uint8_t* center = &img.data[static_cast<std::size_t>(y + 1) * img.width + 1];
        std::uint8_t* out = &map.codes[static_cast<std::size_t>(y) * map.width];
        for (int x = 0; x < map.width; ++x, ++center) {
            const int c = *center;
            int code = 0;
            for (int v = 0; v < 6; ++v) {
                const QuadTap& tap = taps[v];
                const int pair = center[offs[tap.a]] + center[offs[tap.b]];
                code |= (pair >= tap.divisor * c) << v;
            }
            out[x] = static_cast<std::uint8_t>(code);
        }
    }
    return map;
}

CodeMap lbp_encode_map(const GrayImage& img) {
    require_encodable(img);

    CodeMap map;
    map.width = img.width - 2;
    map.height = img.height - 2;
    map.code_range = 256;
    map.descriptor_id = DescriptorId::kLbp;
    map.codes.resize(static_cast<std::size_t>(map.width) * map.height);

    const std::array<std::ptrdiff_t, 8> offs = ring_offsets(img.width);
    for (int y = 0; y < map.height; ++y) {
        const std::uint8_t* center = &img.data[static_cast<std::size_t>(y + 1) * img.width + 1];
        std::uint8_t* out = &map.codes[static_cast<std::size_t>(y) * map.width];
        for (int x = 0; x < map.width; ++x, ++center) {
            const int c = *center;
            int code = 0;
            for (int k = 0; k < 8; ++k) {
                code |= (center[offs[k]] >= c) << k;
            }
            out[x] = static_cast<std::uint8_t>(code);
        }
    }
    return map;
}

GrayImage codemap_to_image(const CodeMap& map, bool visualize) {
    GrayImage img(map.width, map.height);
    const int scale = (visualize && map.descriptor_id == DescriptorId::kQuest) ? 4 : 1;
    for (std::size_t i = 0; i < map.codes.size(); ++i) {
        img.data[i] = static_cast<std::uint8_t>(map.codes[i] * scale);
    }
    return img;
}

}  // namespace quest
