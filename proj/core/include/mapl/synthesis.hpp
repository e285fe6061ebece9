#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mapl/records.hpp"
#include "mapl/rng.hpp"

namespace mapl {

// Knobs for instruction-set construction. The family universe defaults to
// the full roster; tests narrow it to force specific families.
struct SynthesisConfig {
    int k_min = 2;
    int k_max = 4;
    int max_retries = 8;
    std::vector<Family> universe;          // empty = all families
    std::vector<std::string> lexicon;      // empty = default decoy lexicon

    std::span<const Family> families() const;
    std::span<const std::string> decoys() const;
    void validate() const;
};

// Each synthesize_* call consumes only the rng passed to it, so callers can
// derive one stream per (record, product) and run records in any order.

// Two prompt-preference records for one source record, one per response side.
// nullopt means generation stayed infeasible through all retries; the caller
// skips the source record.
std::optional<std::pair<IntraRecord, IntraRecord>> synthesize_intra(const PreferenceRecord& rec,
                                                                    const SynthesisConfig& cfg,
                                                                    Rng& rng);

// One direction=up and one direction=down record.
std::optional<std::pair<InterRecord, InterRecord>> synthesize_inter(const PreferenceRecord& rec,
                                                                    const SynthesisConfig& cfg,
                                                                    Rng& rng);

// follow_kept and follow_reversed records (the original-category record is
// added by build_mlift_dataset).
std::optional<std::pair<MliftRecord, MliftRecord>> synthesize_mlift(const PreferenceRecord& rec,
                                                                    const SynthesisConfig& cfg,
                                                                    Rng& rng);

// Deterministic shuffled partition; both splits keep source order. Train size
// is floor(ratio * n) clamped so neither side is empty.
std::pair<std::vector<PreferenceRecord>, std::vector<PreferenceRecord>> split_corpus(
    std::span<const PreferenceRecord> corpus, double ratio, Rng& rng);

struct EvalIfResult {
    std::vector<IntraRecord> records;
    std::vector<SkipReport> skips;
};

// Applies the intra-sample construction to every record of the eval split.
EvalIfResult build_eval_if(std::span<const PreferenceRecord> eval_set, const SynthesisConfig& cfg,
                           std::uint64_t seed);

// Builds bt/intra/inter jointly; a source record survives only if both intra
// and inter generation succeed, preserving the 1:2:2 cardinality.
MaplDataset build_mapl_dataset(std::span<const PreferenceRecord> train, const SynthesisConfig& cfg,
                               std::uint64_t seed);

// original + follow_kept + follow_reversed per surviving source record.
MliftDataset build_mlift_dataset(std::span<const PreferenceRecord> train,
                                 const SynthesisConfig& cfg, std::uint64_t seed);

// Synthetic source corpus with enough structural variety that every
// constraint family stays feasible during synthesis: word counts in
// [10, 200] (distinct within a pair), sentence counts in [2, 20] (distinct
// within a pair), per-response marker tokens, a shared token, and distinct
// first words.
std::vector<PreferenceRecord> generate_synthetic_corpus(int n, Rng& rng);

namespace detail {
// Exposed for tests: vocabulary used by the synthetic corpus; disjoint from
// the decoy lexicon by construction.
std::span<const std::string> corpus_vocabulary();
}  // namespace detail

}  // namespace mapl
