// pipeline.hpp : the full feature-extraction pipeline and its run parameters
#pragma once

#include <span>
#include <string>

#include "json.hpp"
#include "quest/classifier.hpp"
#include "quest/dataset.hpp"
#include "quest/descriptor.hpp"
#include "quest/features.hpp"

namespace quest {

/// Parameters of one pipeline run. Defaults follow the evaluation setup:
/// 128x128 normalized images, an 8x8 region grid, 5-fold person-independent
/// splits with seed 42 and a linear SVM with c = 1.
struct RunConfig {
    DescriptorId descriptor = DescriptorId::kQuest;
    QuadAssignment quad_assignment = QuadAssignment::kV3;
    int size = 128;
    int grid = 8;
    Protocol protocol = Protocol::kSubjectKFold;
    int folds = 5;
    int repeats = 5;
    std::uint64_t seed = 42;
    ClassifierKind classifier = ClassifierKind::kSvm;
    double c = 1.0;
    int epochs = 50;
    int threads = 0;  // 0 = all hardware threads

    int effective_threads() const;
    void validate() const;
};

/// Config echo embedded in every output artifact. `threads` is deliberately
/// omitted: it can never influence results, and reports must be byte-identical
/// across worker counts.
nlohmann::ordered_json run_config_json(const RunConfig& cfg);

/// Encode with the configured descriptor.
CodeMap encode_image(const GrayImage& img, const RunConfig& cfg);

/// decode -> optional crop -> resize -> encode -> region histograms, for one
/// already-loaded image.
FeatureVector image_features(const GrayImage& img, const RunConfig& cfg);

/// Run the pipeline over manifest records. Relative record paths resolve
/// against `base_dir`. Rows keep manifest order regardless of thread count;
/// errors identify the failing record's manifest line.
FeatureMatrix extract_features(std::span<const SampleRecord> records, const RunConfig& cfg,
                               const std::string& base_dir);

/// Fold plan for the configured protocol over the given rows.
FoldPlan plan_folds(const RunConfig& cfg, std::span<const std::string> subjects);

}  // namespace quest
