#include "quest/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "quest/classifier.hpp"
#include "quest/dataset.hpp"
#include "quest/error.hpp"
#include "quest/features.hpp"
#include "quest/image_io.hpp"
#include "quest/pipeline.hpp"
#include "quest/report.hpp"

namespace quest {

namespace {

namespace fs = std::filesystem;

constexpr int kExitFailure = 1;
constexpr int kExitIo = 2;
constexpr int kExitImageSize = 3;
constexpr int kExitSchema = 4;
constexpr int kExitConfig = 5;

void write_text(const std::string& path, const std::string& text) {
    write_file(path, std::span<const std::uint8_t>(
                         reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::string confusion_caption(const RunConfig& cfg, std::size_t classes) {
    std::ostringstream caption;
    caption << "Confusion matrix of " << upper(descriptor_name(cfg.descriptor)) << " for "
            << classes << "-class expression classification";
    return caption.str();
}

CvConfig make_cv_config(const RunConfig& cfg) {
    CvConfig cv;
    cv.classifier = cfg.classifier;
    cv.svm.c = cfg.c;
    cv.svm.epochs = cfg.epochs;
    cv.svm.seed = cfg.seed;
    cv.threads = cfg.effective_threads();
    return cv;
}

void write_cv_outputs(const std::string& dir, const CvReport& report, const FoldPlan& plan,
                      const RunConfig& cfg, const nlohmann::ordered_json& inputs) {
    fs::create_directories(dir);
    const fs::path base(dir);

    nlohmann::ordered_json doc;
    doc["config"] = run_config_json(cfg);
    doc["inputs"] = inputs;
    doc.update(cv_report_json(report));
    write_text((base / "report.json").string(), doc.dump(2) + "\n");

    write_text((base / "confusion.csv").string(), confusion_table_csv(report.pooled));
    write_text((base / "confusion.txt").string(),
               confusion_table_text(report.pooled,
                                    confusion_caption(cfg, report.pooled.labels.size())));
    write_text((base / "fold_plan.json").string(), fold_plan_to_json(plan));
}

int cmd_encode(const RunConfig& cfg, const std::string& input, const std::string& output,
               bool visualize) {
    const GrayImage img = load_image(input);
    const CodeMap map = encode_image(img, cfg);
    save_pgm(codemap_to_image(map, visualize), output);

    nlohmann::ordered_json sidecar;
    sidecar["config"] = run_config_json(cfg);
    sidecar["input"] = input;
    sidecar["map_width"] = map.width;
    sidecar["map_height"] = map.height;
    sidecar["code_range"] = map.code_range;
    sidecar["visualize"] = visualize;
    write_text(output + ".json", sidecar.dump(2) + "\n");
    return 0;
}

int cmd_extract(const RunConfig& cfg, const std::string& manifest_path,
                const std::string& output) {
    const std::vector<SampleRecord> records = load_manifest_file(manifest_path);
    const std::string base_dir = fs::path(manifest_path).parent_path().string();
    const FeatureMatrix matrix = extract_features(records, cfg, base_dir);
    save_feature_csv(matrix, output);

    nlohmann::ordered_json meta;
    meta["config"] = run_config_json(cfg);
    meta["manifest"] = manifest_path;
    meta["records"] = matrix.size();
    meta["feature_dim"] = matrix.dim;
    write_text(output + ".meta.json", meta.dump(2) + "\n");
    return 0;
}

int cmd_cv(const RunConfig& cfg, const std::string& features_path, const std::string& output) {
    const FeatureMatrix matrix = load_feature_csv(features_path);
    if (matrix.label_set().size() < 2) {
        throw ConfigError("cross-validation needs at least 2 classes");
    }

    const FoldPlan plan = plan_folds(cfg, matrix.subjects);
    const CvReport report = run_cross_validation(plan, matrix, make_cv_config(cfg));

    nlohmann::ordered_json inputs;
    inputs["features_csv"] = features_path;
    inputs["records"] = matrix.size();
    inputs["feature_dim"] = matrix.dim;
    write_cv_outputs(output, report, plan, cfg, inputs);

    std::cout << "Mean accuracy: " << format_fixed2(report.mean_accuracy_percent) << "\n";
    return 0;
}

int cmd_compare(const RunConfig& cfg, const std::string& manifest_path,
                const std::string& output) {
    const std::vector<SampleRecord> records = load_manifest_file(manifest_path);
    const std::string base_dir = fs::path(manifest_path).parent_path().string();

    std::vector<std::string> subjects;
    subjects.reserve(records.size());
    for (const SampleRecord& record : records) subjects.push_back(record.subject);

    // One shared plan, so accuracy differences are attributable to the
    // descriptor alone.
    const FoldPlan plan = plan_folds(cfg, subjects);

    std::ostringstream table_csv;
    std::ostringstream table_text;
    table_csv << "method,mean_accuracy_percent\n";
    table_text << "method  mean_accuracy\n";

    for (const DescriptorId descriptor : {DescriptorId::kLbp, DescriptorId::kQuest}) {
        RunConfig method_cfg = cfg;
        method_cfg.descriptor = descriptor;

        const FeatureMatrix matrix = extract_features(records, method_cfg, base_dir);
        if (matrix.label_set().size() < 2) {
            throw ConfigError("comparison needs at least 2 classes");
        }
        const CvReport report = run_cross_validation(plan, matrix, make_cv_config(method_cfg));

        const fs::path method_dir = fs::path(output) / descriptor_name(descriptor);
        fs::create_directories(method_dir);
        save_feature_csv(matrix, (method_dir / "features.csv").string());

        nlohmann::ordered_json inputs;
        inputs["manifest"] = manifest_path;
        inputs["records"] = matrix.size();
        inputs["feature_dim"] = matrix.dim;
        write_cv_outputs(method_dir.string(), report, plan, method_cfg, inputs);

        const std::string name = upper(descriptor_name(descriptor));
        const std::string accuracy = format_fixed2(report.mean_accuracy_percent);
        table_csv << name << "," << accuracy << "\n";
        table_text << name;
        for (std::size_t i = name.size(); i < 8; ++i) table_text << ' ';
        table_text << accuracy << "\n";
    }

    fs::create_directories(output);
    write_text((fs::path(output) / "comparison.csv").string(), table_csv.str());
    write_text((fs::path(output) / "comparison.txt").string(), table_text.str());
    std::cout << table_text.str();
    return 0;
}

int exit_code_for(const Error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
        dynamic_cast<const ShapeError*>(&e) || dynamic_cast<const ArgumentError*>(&e)) {
        return kExitSchema;
    }
    if (dynamic_cast<const SizeError*>(&e)) return kExitImageSize;
    if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const DecodeError*>(&e) ||
        dynamic_cast<const UnsupportedFormatError*>(&e) ||
        dynamic_cast<const RangeError*>(&e)) {
        return kExitIo;
    }
    return kExitFailure;
}

}  // namespace

int cli_run(std::vector<std::string> args) {
    CLI::App app{"QUEST/LBP texture features and expression-recognition evaluation"};
    app.name("quest");
    app.require_subcommand(1);

    RunConfig cfg;
    std::string descriptor = "quest";
    std::string quad_assignment = "v3";
    std::string protocol = "subject-kfold";
    std::string classifier = "svm";
    std::string input;
    std::string output;
    bool visualize = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--descriptor", descriptor, "Descriptor: quest or lbp");
        cmd->add_option("--quad-assignment", quad_assignment,
                        "QUEST bit-to-quadrilateral rule: v3, v4 or alt");
        cmd->add_option("--size", cfg.size, "Normalized image side in pixels");
        cmd->add_option("--grid", cfg.grid, "Regions per side of the histogram grid");
        cmd->add_option("--protocol", protocol, "Protocol: subject-kfold or random-holdout");
        cmd->add_option("--folds", cfg.folds, "Fold count for subject-kfold");
        cmd->add_option("--repeats", cfg.repeats, "Repeat count for random-holdout");
        cmd->add_option("--seed", cfg.seed, "Seed for every randomized step");
        cmd->add_option("--classifier", classifier, "Classifier: svm or knn");
        cmd->add_option("--c", cfg.c, "SVM regularization parameter");
        cmd->add_option("--epochs", cfg.epochs, "SVM training epochs");
        cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
        cmd->add_option("--output", output, "Output path")->required();
    };

    CLI::App* encode = app.add_subcommand("encode", "Encode one image into a code-map PGM");
    encode->add_option("input", input, "Image file (PGM P5 or PNG)")->required();
    encode->add_flag("--visualize", visualize, "Scale QUEST codes by 4 for display");
    add_common(encode);

    CLI::App* extract = app.add_subcommand("extract", "Extract feature CSV from a manifest");
    extract->add_option("manifest", input, "JSON-Lines manifest")->required();
    add_common(extract);

    CLI::App* cv = app.add_subcommand("cv", "Cross-validate a feature CSV");
    cv->add_option("features", input, "Feature CSV from `extract`")->required();
    add_common(cv);

    CLI::App* compare = app.add_subcommand("compare", "Run QUEST and LBP on one shared plan");
    compare->add_option("manifest", input, "JSON-Lines manifest")->required();
    add_common(compare);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        cfg.descriptor = descriptor_from_name(descriptor);
        cfg.quad_assignment = quad_assignment_from_name(quad_assignment);
        cfg.protocol = protocol_from_name(protocol);
        cfg.classifier = classifier_from_name(classifier);
        cfg.validate();

        if (encode->parsed()) return cmd_encode(cfg, input, output, visualize);
        if (extract->parsed()) return cmd_extract(cfg, input, output);
        if (cv->parsed()) return cmd_cv(cfg, input, output);
        if (compare->parsed()) return cmd_compare(cfg, input, output);
        return kExitFailure;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace quest
