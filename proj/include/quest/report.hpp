// report.hpp : rendering of evaluation results (text table, CSV, JSON)
#pragma once

#include <string>

#include "json.hpp"
#include "quest/classifier.hpp"

namespace quest {

/// Fixed two-decimal rendering used for all human-readable accuracy output.
std::string format_fixed2(double value);

/// Row-normalized confusion table with 2-decimal cells: caption, then a
/// header of predicted labels, then one row per true label.
std::string confusion_table_text(const ConfusionMatrix& matrix, const std::string& caption);

/// Raw counts as CSV, first column the true class.
std::string confusion_table_csv(const ConfusionMatrix& matrix);

nlohmann::ordered_json confusion_json(const ConfusionMatrix& matrix);

/// Full machine-readable cross-validation report; the caller attaches its own
/// "config" and "inputs" sections.
nlohmann::ordered_json cv_report_json(const CvReport& report);

}  // namespace quest
