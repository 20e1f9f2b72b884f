// image_io.hpp : decoding of PGM (binary P5) and PNG files into GrayImage
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "quest/image.hpp"

namespace quest {

/// Decode an in-memory image file. Dispatches on the file signature; PGM (P5)
/// and PNG are supported, color PNG is converted through to_grayscale and any
/// alpha channel is discarded. Throws DecodeError for malformed content of a
/// recognized format and UnsupportedFormatError otherwise.
GrayImage decode_image(std::span<const std::uint8_t> bytes);

GrayImage decode_pgm(std::span<const std::uint8_t> bytes);
GrayImage decode_png(std::span<const std::uint8_t> bytes);

/// Read a whole file and decode it. Throws IoError if the file cannot be read.
GrayImage load_image(const std::string& path);

std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
void save_pgm(const GrayImage& img, const std::string& path);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace quest
