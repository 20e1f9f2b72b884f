#include "quest/features.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "quest/error.hpp"

namespace quest {

std::vector<int> split_axis(int length, int parts) {
    if (parts < 1) {
        throw ArgumentError("split_axis: parts must be at least 1");
    }
    if (length < parts) {
        std::ostringstream msg;
        msg << "split_axis: cannot split length " << length << " into " << parts << " parts";
        throw SizeError(msg.str());
    }
    const int base = length / parts;
    const int extra = length % parts;
    std::vector<int> sizes(parts, base);
    for (int i = 0; i < extra; ++i) sizes[i] += 1;
    return sizes;
}

RegionGrid make_region_grid(int map_width, int map_height, int rows, int cols) {
    if (rows < 1 || cols < 1) {
        throw ArgumentError("region grid must have at least one row and column");
    }
    if (map_width < cols || map_height < rows) {
        std::ostringstream msg;
        msg << "code map " << map_width << "x" << map_height
            << " too small for a " << rows << "x" << cols << " region grid";
        throw SizeError(msg.str());
    }
    RegionGrid grid;
    grid.rows = rows;
    grid.cols = cols;
    grid.row_heights = split_axis(map_height, rows);
    grid.col_widths = split_axis(map_width, cols);
    return grid;
}

std::vector<std::uint32_t> region_histogram(const CodeMap& map, const Rect& region) {
    if (region.w < 1 || region.h < 1) {
        throw ArgumentError("region_histogram: empty region");
    }
    if (region.x < 0 || region.y < 0 || region.x + region.w > map.width ||
        region.y + region.h > map.height) {
        throw RangeError("region_histogram: region outside the code map");
    }

    std::vector<std::uint32_t> bins(map.code_range, 0);
    for (int y = region.y; y < region.y + region.h; ++y) {
        const std::uint8_t* row = &map.codes[static_cast<std::size_t>(y) * map.width];
        for (int x = region.x; x < region.x + region.w; ++x) {
            ++bins[row[x]];
        }
    }
    return bins;
}

FeatureVector extract_feature_vector(const CodeMap& map, int grid_rows, int grid_cols) {
    const RegionGrid grid = make_region_grid(map.width, map.height, grid_rows, grid_cols);

    FeatureVector fv;
    fv.descriptor_id = map.descriptor_id;
    fv.grid_rows = grid.rows;
    fv.grid_cols = grid.cols;
    fv.code_range = map.code_range;
    fv.values.reserve(static_cast<std::size_t>(grid.rows) * grid.cols * map.code_range);

    int y = 0;
    for (int r = 0; r < grid.rows; ++r) {
        int x = 0;
        for (int c = 0; c < grid.cols; ++c) {
            const Rect region{x, y, grid.col_widths[c], grid.row_heights[r]};
            const std::vector<std::uint32_t> bins = region_histogram(map, region);
            const double area = static_cast<double>(region.w) * region.h;
            for (const std::uint32_t count : bins) {
                fv.values.push_back(count / area);
            }
            x += grid.col_widths[c];
        }
        y += grid.row_heights[r];
    }
    return fv;
}

void FeatureMatrix::append_row(std::span<const double> features, std::string label,
                               std::string subject) {
    if (dim == 0 && labels.empty()) {
        dim = features.size();
    }
    if (features.size() != dim) {
        std::ostringstream msg;
        msg << "feature row has dimension " << features.size() << ", expected " << dim;
        throw ShapeError(msg.str());
    }
    values.insert(values.end(), features.begin(), features.end());
    labels.push_back(std::move(label));
    subjects.push_back(std::move(subject));
}

std::vector<std::string> FeatureMatrix::label_set() const {
    std::set<std::string> unique(labels.begin(), labels.end());
    return std::vector<std::string>(unique.begin(), unique.end());
}

namespace {

void require_csv_safe(const std::string& value, const char* what) {
    if (value.find_first_of(",\"\n\r") != std::string::npos) {
        throw ArgumentError(std::string(what) + " contains CSV delimiter characters: " + value);
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix) {
    out << "label,subject";
    for (std::size_t i = 0; i < matrix.dim; ++i) {
        out << ",f" << i;
    }
    out << "\n";

    char buf[64];
    for (std::size_t r = 0; r < matrix.size(); ++r) {
        require_csv_safe(matrix.labels[r], "label");
        require_csv_safe(matrix.subjects[r], "subject");
        out << matrix.labels[r] << "," << matrix.subjects[r];
        for (const double v : matrix.row(r)) {
            std::snprintf(buf, sizeof(buf), "%.9g", v);
            out << "," << buf;
        }
        out << "\n";
    }
}

FeatureMatrix read_feature_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("feature CSV: empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "label" || header[1] != "subject" ||
        header[2] != "f0") {
        throw SchemaError("feature CSV: header must start with label,subject,f0");
    }
    const std::size_t dim = header.size() - 2;

    FeatureMatrix matrix;
    matrix.dim = dim;
    std::vector<double> row(dim);
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != dim + 2) {
            std::ostringstream msg;
            msg << "feature CSV line " << line_no << ": expected " << dim + 2
                << " fields, got " << fields.size();
            throw ParseError(msg.str());
        }
        for (std::size_t i = 0; i < dim; ++i) {
            const std::string& field = fields[i + 2];
            const char* begin = field.data();
            const char* end = begin + field.size();
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc() || ptr != end) {
                std::ostringstream msg;
                msg << "feature CSV line " << line_no << ": bad number \"" << field << "\"";
                throw ParseError(msg.str());
            }
            row[i] = value;
        }
        matrix.append_row(row, fields[0], fields[1]);
    }
    if (matrix.size() == 0) {
        throw ParseError("feature CSV: no data rows");
    }
    return matrix;
}

void save_feature_csv(const FeatureMatrix& matrix, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open file for writing: " + path);
    }
    write_feature_csv(out, matrix);
    if (!out) {
        throw IoError("error while writing file: " + path);
    }
}

FeatureMatrix load_feature_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open file: " + path);
    }
    return read_feature_csv(in);
}

}  // namespace quest
