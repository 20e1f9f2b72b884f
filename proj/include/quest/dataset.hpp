// dataset.hpp : sample manifests and evaluation split plans
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quest/image.hpp"

namespace quest {

/// One labeled image reference from a JSON-Lines manifest.
struct SampleRecord {
    std::string path;
    std::string subject;
    std::string label;
    std::optional<BoundingBox> bbox;
    int line = 0;  // manifest line number, for error reporting
};

/// Parse a JSON-Lines manifest: one object per line with keys "path",
/// "subject", "label" and optional "bbox" [x,y,w,h]. Blank lines are skipped.
std::vector<SampleRecord> load_manifest(std::istream& in);
std::vector<SampleRecord> load_manifest_file(const std::string& path);

enum class Protocol { kSubjectKFold, kRandomHoldout };

std::string protocol_name(Protocol protocol);
Protocol protocol_from_name(const std::string& name);

struct FoldAssignment {
    std::vector<int> train;
    std::vector<int> test;
};

/// Deterministic train/test splits over record indices. For subject-kfold no
/// subject appears on both sides of any fold; for random-holdout each repeat
/// holds out the trailing ~20% of a fresh shuffle.
struct FoldPlan {
    Protocol protocol = Protocol::kSubjectKFold;
    int fold_count = 0;  // folds (subject-kfold) or repeats (random-holdout)
    std::uint64_t seed = 0;
    std::vector<FoldAssignment> folds;
};

/// Shuffle distinct subjects with the seeded generator, deal them round-robin
/// into k groups; fold i tests group i's records and trains on the rest.
FoldPlan make_subject_folds(std::span<const std::string> subjects, int k, std::uint64_t seed);
FoldPlan make_subject_folds(std::span<const SampleRecord> records, int k, std::uint64_t seed);

/// Per repeat, shuffle all record indices; first ceil(0.8 n) train, rest test.
FoldPlan make_random_holdouts(std::size_t record_count, int repeats, std::uint64_t seed);
FoldPlan make_random_holdouts(std::span<const SampleRecord> records, int repeats,
                              std::uint64_t seed);

/// Audit export: protocol, seed and the full index lists.
std::string fold_plan_to_json(const FoldPlan& plan);

}  // namespace quest
