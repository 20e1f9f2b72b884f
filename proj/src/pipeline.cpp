#include "quest/pipeline.hpp"

#include <filesystem>
#include <sstream>
#include <thread>

#include "quest/error.hpp"
#include "quest/image_io.hpp"
#include "quest/parallel.hpp"

namespace quest {

int RunConfig::effective_threads() const {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void RunConfig::validate() const {
    if (size < 1) throw ConfigError("normalized size must be at least 1");
    if (grid < 1) throw ConfigError("region grid must be at least 1");
    if (folds < 2) throw ConfigError("fold count must be at least 2");
    if (repeats < 1) throw ConfigError("repeat count must be at least 1");
    if (c <= 0.0) throw ConfigError("SVM regularization c must be positive");
    if (epochs < 1) throw ConfigError("SVM epoch count must be at least 1");
    if (threads < 0) throw ConfigError("thread count cannot be negative");
}

nlohmann::ordered_json run_config_json(const RunConfig& cfg) {
    nlohmann::ordered_json doc;
    doc["descriptor"] = descriptor_name(cfg.descriptor);
    doc["quad_assignment"] = quad_assignment_name(cfg.quad_assignment);
    doc["size"] = cfg.size;
    doc["grid"] = cfg.grid;
    doc["protocol"] = protocol_name(cfg.protocol);
    doc["folds"] = cfg.folds;
    doc["repeats"] = cfg.repeats;
    doc["seed"] = cfg.seed;
    doc["classifier"] = classifier_name(cfg.classifier);
    doc["c"] = cfg.c;
    doc["epochs"] = cfg.epochs;
    return doc;
}

CodeMap encode_image(const GrayImage& img, const RunConfig& cfg) {
    if (cfg.descriptor == DescriptorId::kLbp) {
        return lbp_encode_map(img);
    }
    QuestConfig quest_cfg;
    quest_cfg.quad_assignment = cfg.quad_assignment;
    return quest_encode_map(img, quest_cfg);
}

FeatureVector image_features(const GrayImage& img, const RunConfig& cfg) {
    const GrayImage normalized = resize_bilinear(img, cfg.size, cfg.size);
    const CodeMap map = encode_image(normalized, cfg);
    return extract_feature_vector(map, cfg.grid, cfg.grid);
}

namespace {

std::string resolve_path(const std::string& path, const std::string& base_dir) {
    const std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

FeatureVector record_features(const SampleRecord& record, const RunConfig& cfg,
                              const std::string& base_dir) {
    std::ostringstream prefix;
    prefix << "record at manifest line " << record.line << " (" << record.path << "): ";
    try {
        GrayImage img = load_image(resolve_path(record.path, base_dir));
        if (record.bbox) {
            img = crop(img, *record.bbox);
        }
        return image_features(img, cfg);
    } catch (const IoError& e) {
        throw IoError(prefix.str() + e.what());
    } catch (const UnsupportedFormatError& e) {
        throw UnsupportedFormatError(prefix.str() + e.what());
    } catch (const DecodeError& e) {
        throw DecodeError(prefix.str() + e.what());
    } catch (const RangeError& e) {
        throw RangeError(prefix.str() + e.what());
    } catch (const SizeError& e) {
        throw SizeError(prefix.str() + e.what());
    }
}

}  // namespace

FeatureMatrix extract_features(std::span<const SampleRecord> records, const RunConfig& cfg,
                               const std::string& base_dir) {
    if (records.empty()) {
        throw ArgumentError("no records to extract features from");
    }

    std::vector<FeatureVector> rows(records.size());
    parallel_for(records.size(), cfg.effective_threads(), [&](std::size_t i) {
        rows[i] = record_features(records[i], cfg, base_dir);
    });

    FeatureMatrix matrix;
    for (std::size_t i = 0; i < records.size(); ++i) {
        matrix.append_row(rows[i].values, records[i].label, records[i].subject);
    }
    return matrix;
}

FoldPlan plan_folds(const RunConfig& cfg, std::span<const std::string> subjects) {
    if (cfg.protocol == Protocol::kSubjectKFold) {
        return make_subject_folds(subjects, cfg.folds, cfg.seed);
    }
    return make_random_holdouts(subjects.size(), cfg.repeats, cfg.seed);
}

}  // namespace quest
