#include "quest/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "quest/error.hpp"
#include "quest/rng.hpp"

namespace quest {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string require_string(const json& obj, const char* key, int line) {
    if (!obj.contains(key)) {
        std::ostringstream msg;
        msg << "manifest line " << line << ": missing required key \"" << key << "\"";
        throw SchemaError(msg.str());
    }
    if (!obj[key].is_string() || obj[key].get<std::string>().empty()) {
        std::ostringstream msg;
        msg << "manifest line " << line << ": key \"" << key << "\" must be a non-empty string";
        throw SchemaError(msg.str());
    }
    return obj[key].get<std::string>();
}

BoundingBox parse_bbox(const json& value, int line) {
    std::ostringstream msg;
    msg << "manifest line " << line << ": bbox must be [x,y,w,h] with x,y >= 0 and w,h >= 1";
    if (!value.is_array() || value.size() != 4) {
        throw SchemaError(msg.str());
    }
    int fields[4];
    for (std::size_t i = 0; i < 4; ++i) {
        if (!value[i].is_number_integer()) {
            throw SchemaError(msg.str());
        }
        fields[i] = value[i].get<int>();
    }
    if (fields[0] < 0 || fields[1] < 0 || fields[2] < 1 || fields[3] < 1) {
        throw SchemaError(msg.str());
    }
    return BoundingBox{fields[0], fields[1], fields[2], fields[3]};
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

std::vector<SampleRecord> load_manifest(std::istream& in) {
    std::vector<SampleRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            std::ostringstream msg;
            msg << "manifest line " << line_no << ": " << e.what();
            throw ParseError(msg.str());
        }
        if (!obj.is_object()) {
            std::ostringstream msg;
            msg << "manifest line " << line_no << ": expected a JSON object";
            throw SchemaError(msg.str());
        }

        SampleRecord record;
        record.path = require_string(obj, "path", line_no);
        record.subject = require_string(obj, "subject", line_no);
        record.label = require_string(obj, "label", line_no);
        if (obj.contains("bbox") && !obj["bbox"].is_null()) {
            record.bbox = parse_bbox(obj["bbox"], line_no);
        }
        record.line = line_no;
        records.push_back(std::move(record));
    }
    if (records.empty()) {
        throw ArgumentError("manifest contains no records");
    }
    return records;
}

std::vector<SampleRecord> load_manifest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open manifest: " + path);
    }
    return load_manifest(in);
}

std::string protocol_name(Protocol protocol) {
    return protocol == Protocol::kSubjectKFold ? "subject-kfold" : "random-holdout";
}

Protocol protocol_from_name(const std::string& name) {
    if (name == "subject-kfold") return Protocol::kSubjectKFold;
    if (name == "random-holdout") return Protocol::kRandomHoldout;
    throw ConfigError("unknown protocol \"" + name +
                      "\" (expected subject-kfold or random-holdout)");
}

FoldPlan make_subject_folds(std::span<const std::string> subjects, int k, std::uint64_t seed) {
    if (k < 2) {
        throw ConfigError("subject-kfold needs at least 2 folds");
    }

    // Distinct subjects in order of first appearance, then a seeded shuffle.
    std::vector<std::string> distinct;
    for (const std::string& s : subjects) {
        if (std::find(distinct.begin(), distinct.end(), s) == distinct.end()) {
            distinct.push_back(s);
        }
    }
    if (static_cast<int>(distinct.size()) < k) {
        std::ostringstream msg;
        msg << "subject-kfold with k=" << k << " needs at least " << k
            << " distinct subjects, got " << distinct.size();
        throw ConfigError(msg.str());
    }

    Rng rng(seed);
    rng.shuffle(distinct);

    // Round-robin deal: shuffled subject j goes to group j mod k.
    std::vector<int> group_of_subject(distinct.size());
    for (std::size_t j = 0; j < distinct.size(); ++j) {
        group_of_subject[j] = static_cast<int>(j % k);
    }

    FoldPlan plan;
    plan.protocol = Protocol::kSubjectKFold;
    plan.fold_count = k;
    plan.seed = seed;
    plan.folds.resize(k);
    for (int i = 0; i < static_cast<int>(subjects.size()); ++i) {
        const auto it = std::find(distinct.begin(), distinct.end(), subjects[i]);
        const int group = group_of_subject[static_cast<std::size_t>(it - distinct.begin())];
        for (int fold = 0; fold < k; ++fold) {
            (fold == group ? plan.folds[fold].test : plan.folds[fold].train).push_back(i);
        }
    }
    return plan;
}

FoldPlan make_subject_folds(std::span<const SampleRecord> records, int k, std::uint64_t seed) {
    std::vector<std::string> subjects;
    subjects.reserve(records.size());
    for (const SampleRecord& r : records) subjects.push_back(r.subject);
    return make_subject_folds(std::span<const std::string>(subjects), k, seed);
}

FoldPlan make_random_holdouts(std::size_t record_count, int repeats, std::uint64_t seed) {
    if (repeats < 1) {
        throw ConfigError("random-holdout needs at least 1 repeat");
    }
    if (record_count < 5) {
        std::ostringstream msg;
        msg << "random-holdout needs at least 5 records, got " << record_count;
        throw SizeError(msg.str());
    }

    FoldPlan plan;
    plan.protocol = Protocol::kRandomHoldout;
    plan.fold_count = repeats;
    plan.seed = seed;

    const std::size_t train_count = (record_count * 8 + 9) / 10;  // ceil(0.8 n)
    Rng rng(seed);
    std::vector<int> indices(record_count);
    for (int r = 0; r < repeats; ++r) {
        for (std::size_t i = 0; i < record_count; ++i) indices[i] = static_cast<int>(i);
        rng.shuffle(indices);
        FoldAssignment fold;
        fold.train.assign(indices.begin(), indices.begin() + train_count);
        fold.test.assign(indices.begin() + train_count, indices.end());
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

FoldPlan make_random_holdouts(std::span<const SampleRecord> records, int repeats,
                              std::uint64_t seed) {
    return make_random_holdouts(records.size(), repeats, seed);
}

std::string fold_plan_to_json(const FoldPlan& plan) {
    ordered_json doc;
    doc["protocol"] = protocol_name(plan.protocol);
    doc["fold_count"] = plan.fold_count;
    doc["seed"] = plan.seed;
    doc["folds"] = ordered_json::array();
    for (const FoldAssignment& fold : plan.folds) {
        ordered_json entry;
        entry["train"] = fold.train;
        entry["test"] = fold.test;
        doc["folds"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

}  // namespace quest
