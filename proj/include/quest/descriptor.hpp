// descriptor.hpp : QUEST senary-bit code maps and the 8-neighbor LBP baseline
//
// Both descriptors read the 3x3 neighborhood around every interior pixel.
// Neighbor indexing convention used throughout (x right, y down):
//
//   I3 I2 I1
//   I4 Ic I0        I_0 east, then counter-clockwise in 45-degree steps.
//   I5 I6 I7
//
// QUEST emits one 6-bit code per pixel. Bit v compares the average of a
// neighbor pair, drawn from one of two quadrilaterals, against the center:
//
//   bit v = [ (I_a + I_b) / ((psi(v) / 3) + 2)  >=  I_c ]
//   a = (2v - omega + psi(v)) mod 8,  b = 2(v - omega + 1) mod 8
//   psi(v) = floor(v / 4) * 6
//
// omega in {0, 1} selects the quadrilateral for bit v; the assignment rule is
// configurable (see QuadAssignment). For v in 0..3 the divisor is 2 (plain
// pair average), for v in 4..5 it is 4 (half the pair average). Comparisons
// treat equality as 1.
//
// LBP is the classic baseline: bit k = [I_k >= I_c], k = 0..7.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "quest/image.hpp"

namespace quest {

enum class DescriptorId { kQuest, kLbp };

std::string descriptor_name(DescriptorId id);
DescriptorId descriptor_from_name(const std::string& name);

/// Rule mapping bit index v in [0,5] to quadrilateral index omega in {0,1}.
enum class QuadAssignment {
    kV3,   // omega = v / 3  (bits 0-2 from quad 0, bits 3-5 from quad 1); default
    kV4,   // omega = v / 4
    kAlt,  // omega = v % 2
};

std::string quad_assignment_name(QuadAssignment qa);
QuadAssignment quad_assignment_from_name(const std::string& name);

struct QuestConfig {
    static constexpr int kNeighborhood = 8;  // p; the psi constants assume 8
    QuadAssignment quad_assignment = QuadAssignment::kV3;

    int omega(int v) const;
};

/// Per-pixel descriptor codes over the interior of the source image
/// (the 1-pixel border is skipped, so the map is (width-2) x (height-2)).
struct CodeMap {
    int width = 0;
    int height = 0;
    int code_range = 0;  // 64 for QUEST, 256 for LBP
    DescriptorId descriptor_id = DescriptorId::kQuest;
    std::vector<std::uint8_t> codes;  // row-major

    std::uint8_t at(int x, int y) const { return codes[static_cast<std::size_t>(y) * width + x]; }
};

/// psi(eta) = floor(eta / 4) * (p - 2). Requires p = 8 and eta in [0, 5].
int psi(int eta, int p = QuestConfig::kNeighborhood);

/// Ring neighbors I_0..I_7 of a row-major 3x3 patch, per the convention above.
std::array<std::uint8_t, 8> ring_neighbors(const std::array<std::uint8_t, 9>& patch);

/// Quadrilateral pair average Q_{v,omega} in real arithmetic.
double quad_sample(const std::array<std::uint8_t, 8>& neighbors, int v, int omega);

/// 6-bit QUEST code of a row-major 3x3 patch; the center is patch[4].
int quest_encode_pixel(const std::array<std::uint8_t, 9>& patch, const QuestConfig& cfg = {});

/// 8-bit LBP code of a row-major 3x3 patch.
int lbp_encode_pixel(const std::array<std::uint8_t, 9>& patch);

/// QUEST code map of an image (at least 3x3).
CodeMap quest_encode_map(const GrayImage& img, const QuestConfig& cfg = {});

/// LBP code map of an image (at least 3x3).
CodeMap lbp_encode_map(const GrayImage& img);

/// Code map as an 8-bit image. With `visualize` set, QUEST codes are
/// multiplied by 4 for display contrast; raw codes otherwise.
GrayImage codemap_to_image(const CodeMap& map, bool visualize = false);

}  // namespace quest
