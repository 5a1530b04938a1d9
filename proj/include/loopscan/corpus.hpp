#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "loopscan/taxonomy.hpp"

namespace loopscan {

struct GroundTruthAnnotation {
    std::string sample_id;
    int line_start = 1;  // 1-based, inclusive
    int line_end = 1;
    Category category = Category::LoopControlLogic;
    PatternKind kind = PatternKind::InfiniteLoop;
    std::string note;
};

struct CodeSample {
    std::string sample_id;
    std::string source;
    std::string min_python_version = "3.7";
    std::vector<GroundTruthAnnotation> annotations;
};

struct CorpusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Corpus file: {"version":1,"samples":[...]} with lower_snake category/kind ids.
// Unknown fields are rejected; every invariant is validated on load.
std::vector<CodeSample> load_corpus(const std::filesystem::path& path);

void save_corpus(const std::vector<CodeSample>& samples, const std::filesystem::path& path,
                 const std::string& config_fingerprint = "");

// Seeded sample generator. For every pattern kind in the selected categories it
// emits one annotated vulnerable sample and one clean counterpart. Identifiers
// and constants vary with the seed; the structural fault never does.
std::vector<CodeSample> generate_seed_corpus(const std::set<Category>& categories,
                                             std::uint64_t rng_seed);

}  // namespace loopscan
