#include "quest/image_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "quest/error.hpp"

namespace quest {

namespace {

// ---------------------------------------------------------------------------
// PGM (binary P5)
// ---------------------------------------------------------------------------

class PgmCursor {
public:
    explicit PgmCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments, then reads one decimal field.
    int read_number(const char* field) {
        skip_space_and_comments(field);
        if (pos_ >= bytes_.size() || !is_digit(bytes_[pos_])) {
            throw DecodeError(std::string("PGM: expected ") + field + " in header");
        }
        long value = 0;
        while (pos_ < bytes_.size() && is_digit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000L) {
                throw DecodeError(std::string("PGM: ") + field + " out of range");
            }
            ++pos_;
        }
        return static_cast<int>(value);
    }

    // Exactly one whitespace byte separates the header from the raster.
    void expect_raster_separator() {
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
            throw DecodeError("PGM: missing separator before pixel data");
        }
        ++pos_;
    }

    std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

private:
    static bool is_space(std::uint8_t c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
    }
    static bool is_digit(std::uint8_t c) { return c >= '0' && c <= '9'; }

    void skip_space_and_comments(const char* field) {
        for (;;) {
            while (pos_ < bytes_.size() && is_space(bytes_[pos_])) ++pos_;
            if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
                continue;
            }
            if (pos_ >= bytes_.size()) {
                throw DecodeError(std::string("PGM: truncated header before ") + field);
            }
            return;
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2;  // past the "P5" magic
};

// ---------------------------------------------------------------------------
// PNG
// ---------------------------------------------------------------------------

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::uint32_t read_be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

struct PngHeader {
    int width = 0;
    int height = 0;
    int bit_depth = 0;
    int color_type = 0;
    int interlace = 0;
    int channels = 0;
};

int channels_for_color_type(int color_type) {
    switch (color_type) {
        case 0: return 1;  // grayscale
        case 2: return 3;  // rgb
        case 3: return 1;  // palette index
        case 4: return 2;  // gray + alpha
        case 6: return 4;  // rgb + alpha
        default: return 0;
    }
}

bool valid_depth(int color_type, int depth) {
    switch (color_type) {
        case 0: return depth == 1 || depth == 2 || depth == 4 || depth == 8 || depth == 16;
        case 3: return depth == 1 || depth == 2 || depth == 4 || depth == 8;
        case 2:
        case 4:
        case 6: return depth == 8 || depth == 16;
        default: return false;
    }
}

struct PngPass {
    int x0, y0, dx, dy;  // origin and stride of an Adam7 pass in image space
    int width = 0, height = 0;
};

// Adam7 pass grid; a single full pass when not interlaced.
std::vector<PngPass> make_passes(const PngHeader& hdr) {
    std::vector<PngPass> passes;
    if (hdr.interlace == 0) {
        passes.push_back({0, 0, 1, 1, hdr.width, hdr.height});
        return passes;
    }
    static constexpr PngPass kAdam7[7] = {
        {0, 0, 8, 8}, {4, 0, 8, 8}, {0, 4, 4, 8}, {2, 0, 4, 4},
        {0, 2, 2, 4}, {1, 0, 2, 2}, {0, 1, 1, 2},
    };
    for (const PngPass& grid : kAdam7) {
        PngPass p = grid;
        p.width = grid.x0 < hdr.width ? (hdr.width - grid.x0 + grid.dx - 1) / grid.dx : 0;
        p.height = grid.y0 < hdr.height ? (hdr.height - grid.y0 + grid.dy - 1) / grid.dy : 0;
        passes.push_back(p);
    }
    return passes;
}

std::size_t row_bytes(const PngHeader& hdr, int width) {
    const std::size_t bits = static_cast<std::size_t>(width) * hdr.channels * hdr.bit_depth;
    return (bits + 7) / 8;
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a);
    const int pb = std::abs(p - b);
    const int pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

// In-place reconstruction of one pass's filtered scanlines. `data` holds
// height rows of (1 filter byte + stride bytes); returns the raw row bytes.
std::vector<std::uint8_t> unfilter_pass(std::uint8_t* data, std::size_t stride, int height,
                                        int bytes_per_pixel) {
    std::vector<std::uint8_t> raw(stride * height);
    const std::uint8_t* prev = nullptr;
    for (int y = 0; y < height; ++y) {
        const std::uint8_t filter = data[static_cast<std::size_t>(y) * (stride + 1)];
        const std::uint8_t* src = data + static_cast<std::size_t>(y) * (stride + 1) + 1;
        std::uint8_t* dst = raw.data() + static_cast<std::size_t>(y) * stride;
        switch (filter) {
            case 0:
                std::memcpy(dst, src, stride);
                break;
            case 1:
                for (std::size_t i = 0; i < stride; ++i) {
                    const int left = i >= static_cast<std::size_t>(bytes_per_pixel)
                                         ? dst[i - bytes_per_pixel] : 0;
                    dst[i] = static_cast<std::uint8_t>(src[i] + left);
                }
                break;
            case 2:
                for (std::size_t i = 0; i < stride; ++i) {
                    const int up = prev ? prev[i] : 0;
                    dst[i] = static_cast<std::uint8_t>(src[i] + up);
                }
                break;
            case 3:
                for (std::size_t i = 0; i < stride; ++i) {
                    const int left = i >= static_cast<std::size_t>(bytes_per_pixel)
                                         ? dst[i - bytes_per_pixel] : 0;
                    const int up = prev ? prev[i] : 0;
                    dst[i] = static_cast<std::uint8_t>(src[i] + (left + up) / 2);
                }
                break;
            case 4:
                for (std::size_t i = 0; i < stride; ++i) {
                    const int left = i >= static_cast<std::size_t>(bytes_per_pixel)
                                         ? dst[i - bytes_per_pixel] : 0;
                    const int up = prev ? prev[i] : 0;
                    const int up_left = (prev && i >= static_cast<std::size_t>(bytes_per_pixel))
                                            ? prev[i - bytes_per_pixel] : 0;
                    dst[i] = static_cast<std::uint8_t>(src[i] + paeth(left, up, up_left));
                }
                break;
            default:
                throw DecodeError("PNG: invalid scanline filter type");
        }
        prev = dst;
    }
    return raw;
}

// Reads sample `index` of a raw scanline, scaled to [0, 255] for depths < 8
// (palette indices are returned unscaled).
int read_sample(const std::uint8_t* row, std::size_t index, int depth, bool scale) {
    switch (depth) {
        case 16: return row[index * 2];  // most significant byte
        case 8: return row[index];
        default: {
            const int per_byte = 8 / depth;
            const int shift = 8 - depth * (static_cast<int>(index % per_byte) + 1);
            const int mask = (1 << depth) - 1;
            const int v = (row[index / per_byte] >> shift) & mask;
            return scale ? v * 255 / mask : v;
        }
    }
}

GrayImage assemble_png(const PngHeader& hdr, const std::vector<std::uint8_t>& palette_gray,
                       std::vector<std::uint8_t>& filtered) {
    GrayImage out(hdr.width, hdr.height);
    const int bpp = std::max(1, hdr.channels * hdr.bit_depth / 8);
    std::size_t offset = 0;

    for (const PngPass& pass : make_passes(hdr)) {
        if (pass.width == 0 || pass.height == 0) continue;
        const std::size_t stride = row_bytes(hdr, pass.width);
        std::vector<std::uint8_t> raw =
            unfilter_pass(filtered.data() + offset, stride, pass.height, bpp);
        offset += (stride + 1) * pass.height;

        for (int py = 0; py < pass.height; ++py) {
            const std::uint8_t* row = raw.data() + static_cast<std::size_t>(py) * stride;
            for (int px = 0; px < pass.width; ++px) {
                const std::size_t s = static_cast<std::size_t>(px) * hdr.channels;
                int gray = 0;
                switch (hdr.color_type) {
                    case 0:
                    case 4:
                        gray = read_sample(row, s, hdr.bit_depth, true);
                        break;
                    case 2:
                    case 6:
                        gray = to_grayscale(
                            static_cast<std::uint8_t>(read_sample(row, s + 0, hdr.bit_depth, true)),
                            static_cast<std::uint8_t>(read_sample(row, s + 1, hdr.bit_depth, true)),
                            static_cast<std::uint8_t>(read_sample(row, s + 2, hdr.bit_depth, true)));
                        break;
                    case 3: {
                        const std::size_t idx =
                            static_cast<std::size_t>(read_sample(row, s, hdr.bit_depth, false));
                        if (idx >= palette_gray.size()) {
                            throw DecodeError("PNG: palette index out of range");
                        }
                        gray = palette_gray[idx];
                        break;
                    }
                }
                out.at(pass.x0 + px * pass.dx, pass.y0 + py * pass.dy) =
                    static_cast<std::uint8_t>(gray);
            }
        }
    }
    return out;
}

}  // namespace

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
    PgmCursor cursor(bytes);
    const int width = cursor.read_number("width");
    const int height = cursor.read_number("height");
    const int maxval = cursor.read_number("maxval");
    if (width < 1 || height < 1) {
        throw DecodeError("PGM: dimensions must be positive");
    }
    if (maxval < 1 || maxval > 255) {
        std::ostringstream msg;
        msg << "PGM: maxval " << maxval << " not supported (8-bit only)";
        throw DecodeError(msg.str());
    }
    cursor.expect_raster_separator();

    const std::span<const std::uint8_t> raster = cursor.rest();
    const std::size_t expected = static_cast<std::size_t>(width) * height;
    if (raster.size() < expected) {
        throw DecodeError("PGM: truncated pixel data");
    }
    GrayImage img(width, height);
    std::copy(raster.begin(), raster.begin() + expected, img.data.begin());
    return img;
}

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSignature, 8) != 0) {
        throw DecodeError("PNG: bad signature");
    }

    PngHeader hdr;
    bool seen_ihdr = false;
    bool seen_iend = false;
    std::vector<std::uint8_t> palette_gray;
    std::vector<std::uint8_t> compressed;

    std::size_t pos = 8;
    while (!seen_iend) {
        if (pos + 8 > bytes.size()) {
            throw DecodeError("PNG: truncated chunk header");
        }
        const std::uint32_t length = read_be32(&bytes[pos]);
        if (length > 0x7fffffffu || pos + 12 + length > bytes.size()) {
            throw DecodeError("PNG: truncated chunk data");
        }
        const std::uint8_t* type = &bytes[pos + 4];
        const std::uint8_t* data = &bytes[pos + 8];
        const std::uint32_t stored_crc = read_be32(data + length);
        const std::uint32_t computed_crc = static_cast<std::uint32_t>(
            crc32(crc32(0L, type, 4), data, length));
        if (stored_crc != computed_crc) {
            throw DecodeError("PNG: chunk CRC mismatch");
        }

        const std::string name(reinterpret_cast<const char*>(type), 4);
        if (name == "IHDR") {
            if (seen_ihdr || length != 13) {
                throw DecodeError("PNG: malformed IHDR");
            }
            seen_ihdr = true;
            const std::uint32_t w = read_be32(data);
            const std::uint32_t h = read_be32(data + 4);
            if (w == 0 || h == 0 || w > 0x01000000u || h > 0x01000000u ||
                static_cast<std::uint64_t>(w) * h > (1u << 30)) {
                throw DecodeError("PNG: unreasonable image dimensions");
            }
            hdr.width = static_cast<int>(w);
            hdr.height = static_cast<int>(h);
            hdr.bit_depth = data[8];
            hdr.color_type = data[9];
            hdr.interlace = data[12];
            hdr.channels = channels_for_color_type(hdr.color_type);
            if (hdr.channels == 0 || !valid_depth(hdr.color_type, hdr.bit_depth)) {
                throw DecodeError("PNG: invalid color type / bit depth combination");
            }
            if (data[10] != 0 || data[11] != 0 || (hdr.interlace != 0 && hdr.interlace != 1)) {
                throw DecodeError("PNG: unknown compression, filter or interlace method");
            }
        } else if (name == "PLTE") {
            if (!seen_ihdr || length % 3 != 0 || length == 0 || length > 256 * 3) {
                throw DecodeError("PNG: malformed PLTE");
            }
            palette_gray.resize(length / 3);
            for (std::size_t i = 0; i < palette_gray.size(); ++i) {
                palette_gray[i] = to_grayscale(data[i * 3], data[i * 3 + 1], data[i * 3 + 2]);
            }
        } else if (name == "IDAT") {
            if (!seen_ihdr) {
                throw DecodeError("PNG: IDAT before IHDR");
            }
            compressed.insert(compressed.end(), data, data + length);
        } else if (name == "IEND") {
            seen_iend = true;
        }
        // Ancillary chunks (tRNS, gAMA, tEXt, ...) are skipped.
        pos += 12 + length;
    }

    if (!seen_ihdr) {
        throw DecodeError("PNG: missing IHDR");
    }
    if (hdr.color_type == 3 && palette_gray.empty()) {
        throw DecodeError("PNG: palette image without PLTE");
    }
    if (compressed.empty()) {
        throw DecodeError("PNG: missing IDAT");
    }

    std::size_t expected = 0;
    for (const PngPass& pass : make_passes(hdr)) {
        if (pass.width == 0 || pass.height == 0) continue;
        expected += (row_bytes(hdr, pass.width) + 1) * pass.height;
    }

    std::vector<std::uint8_t> filtered(expected);
    uLongf dest_len = static_cast<uLongf>(expected);
    const int rc = uncompress(filtered.data(), &dest_len, compressed.data(),
                              static_cast<uLong>(compressed.size()));
    if (rc != Z_OK || dest_len != expected) {
        throw DecodeError("PNG: corrupt or truncated compressed pixel data");
    }

    return assemble_png(hdr, palette_gray, filtered);
}

GrayImage decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0) {
        return decode_png(bytes);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P') {
        if (bytes[1] == '5') {
            return decode_pgm(bytes);
        }
        if (bytes[1] >= '1' && bytes[1] <= '7') {
            std::ostringstream msg;
            msg << "PNM variant P" << static_cast<char>(bytes[1])
                << " is not supported (binary P5 only)";
            throw UnsupportedFormatError(msg.str());
        }
    }
    throw UnsupportedFormatError("unrecognized image format (PGM P5 and PNG are supported)");
}

GrayImage load_image(const std::string& path) {
    return decode_image(read_file(path));
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    std::ostringstream header;
    header << "P5\n" << img.width << " " << img.height << "\n255\n";
    const std::string head = header.str();
    std::vector<std::uint8_t> out(head.begin(), head.end());
    out.insert(out.end(), img.data.begin(), img.data.end());
    return out;
}

void save_pgm(const GrayImage& img, const std::string& path) {
    write_file(path, encode_pgm(img));
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("error while reading file: " + path);
    }
    return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open file for writing: " + path);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("error while writing file: " + path);
    }
}

}  // namespace quest
