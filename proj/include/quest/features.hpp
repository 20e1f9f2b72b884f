// features.hpp : region-grid histogram features over descriptor code maps
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "quest/descriptor.hpp"

namespace quest {

/// First `length % parts` segments get the extra pixel; lengths sum to `length`.
std::vector<int> split_axis(int length, int parts);

/// Region layout over a code map: `rows` x `cols` regions whose per-axis sizes
/// differ by at most one.
struct RegionGrid {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_heights;
    std::vector<int> col_widths;
};

RegionGrid make_region_grid(int map_width, int map_height, int rows, int cols);

struct Rect {
    int x = 0, y = 0, w = 0, h = 0;
};

/// Occurrence count per code value inside `region`; one bin per code.
std::vector<std::uint32_t> region_histogram(const CodeMap& map, const Rect& region);

/// Concatenation of the per-region histograms in row-major region order, each
/// region L1-normalized to sum 1. Length = rows * cols * code_range.
struct FeatureVector {
    std::vector<double> values;
    DescriptorId descriptor_id = DescriptorId::kQuest;
    int grid_rows = 0;
    int grid_cols = 0;
    int code_range = 0;
};

FeatureVector extract_feature_vector(const CodeMap& map, int grid_rows, int grid_cols);

/// Labeled feature rows, the unit of exchange between extraction, fold
/// planning and classification. Row-major flat storage.
struct FeatureMatrix {
    std::size_t dim = 0;
    std::vector<double> values;  // size() * dim
    std::vector<std::string> labels;
    std::vector<std::string> subjects;

    std::size_t size() const { return labels.size(); }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values.data() + i * dim, dim);
    }
    void append_row(std::span<const double> features, std::string label, std::string subject);

    /// Distinct labels, sorted ascending.
    std::vector<std::string> label_set() const;
};

/// CSV with header `label,subject,f0,...,f{D-1}`; values at 9 significant digits.
void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix);
FeatureMatrix read_feature_csv(std::istream& in);

void save_feature_csv(const FeatureMatrix& matrix, const std::string& path);
FeatureMatrix load_feature_csv(const std::string& path);

}  // namespace quest
