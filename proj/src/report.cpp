#include "quest/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace quest {

std::string format_fixed2(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

std::string confusion_table_text(const ConfusionMatrix& matrix, const std::string& caption) {
    const std::size_t n = matrix.labels.size();
    std::size_t width = 4;  // "0.00"
    for (const std::string& label : matrix.labels) {
        width = std::max(width, label.size());
    }

    std::ostringstream out;
    out << caption << "\n\n";

    auto pad = [&out, width](const std::string& cell) {
        for (std::size_t i = cell.size(); i < width; ++i) out << ' ';
        out << cell;
    };

    pad("");
    for (const std::string& label : matrix.labels) {
        out << "  ";
        pad(label);
    }
    out << "\n";

    for (std::size_t row = 0; row < n; ++row) {
        pad(matrix.labels[row]);
        std::uint64_t row_sum = 0;
        for (std::size_t col = 0; col < n; ++col) row_sum += matrix.at(row, col);
        for (std::size_t col = 0; col < n; ++col) {
            const double share =
                row_sum == 0 ? 0.0 : static_cast<double>(matrix.at(row, col)) / row_sum;
            out << "  ";
            pad(format_fixed2(share));
        }
        out << "\n";
    }
    return out.str();
}

std::string confusion_table_csv(const ConfusionMatrix& matrix) {
    std::ostringstream out;
    out << "true_class";
    for (const std::string& label : matrix.labels) out << "," << label;
    out << "\n";
    for (std::size_t row = 0; row < matrix.labels.size(); ++row) {
        out << matrix.labels[row];
        for (std::size_t col = 0; col < matrix.labels.size(); ++col) {
            out << "," << matrix.at(row, col);
        }
        out << "\n";
    }
    return out.str();
}

nlohmann::ordered_json confusion_json(const ConfusionMatrix& matrix) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t row = 0; row < matrix.labels.size(); ++row) {
        nlohmann::ordered_json cells = nlohmann::ordered_json::array();
        for (std::size_t col = 0; col < matrix.labels.size(); ++col) {
            cells.push_back(matrix.at(row, col));
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

nlohmann::ordered_json cv_report_json(const CvReport& report) {
    nlohmann::ordered_json doc;
    doc["protocol"] = protocol_name(report.protocol);
    doc["seed"] = report.seed;
    doc["classifier"] = classifier_name(report.classifier);
    doc["mean_accuracy_percent"] = report.mean_accuracy_percent;

    nlohmann::ordered_json accuracies = nlohmann::ordered_json::array();
    for (const FoldReport& fold : report.folds) accuracies.push_back(fold.accuracy_percent);
    doc["fold_accuracies_percent"] = std::move(accuracies);

    doc["warnings"] = report.warnings;
    doc["labels"] = report.pooled.labels;
    doc["pooled_confusion"] = confusion_json(report.pooled);

    nlohmann::ordered_json folds = nlohmann::ordered_json::array();
    for (const FoldReport& fold : report.folds) {
        nlohmann::ordered_json entry;
        entry["accuracy_percent"] = fold.accuracy_percent;
        entry["test_indices"] = fold.test_indices;
        entry["predictions"] = fold.predictions;
        entry["confusion"] = confusion_json(fold.confusion);
        folds.push_back(std::move(entry));
    }
    doc["folds"] = std::move(folds);
    return doc;
}

}  // namespace quest
