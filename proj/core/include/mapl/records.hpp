#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mapl/constraints.hpp"
#include "mapl/text.hpp"

namespace mapl {

// One original preference tuple from the base corpus.
struct PreferenceRecord {
    std::string record_id;
    std::string prompt;
    ResponseText chosen;
    ResponseText rejected;
};

enum class Side { chosen, rejected };
enum class Relationship { all_true_vs_some_false, some_true_vs_all_false };
enum class Direction { up, down };
enum class MliftCategory { original, follow_kept, follow_reversed };

const std::string& to_string(Side v);
const std::string& to_string(Relationship v);
const std::string& to_string(Direction v);
const std::string& to_string(MliftCategory v);

std::optional<Side> side_from_string(std::string_view s);
std::optional<Relationship> relationship_from_string(std::string_view s);
std::optional<Direction> direction_from_string(std::string_view s);
std::optional<MliftCategory> mlift_category_from_string(std::string_view s);

// Prompt-preference pair for a fixed response. prompt_w is preferred over
// prompt_l because the response follows its instructions better, in the sense
// recorded by `relationship`.
struct IntraRecord {
    std::string record_id;
    std::string prompt_w;
    std::string prompt_l;
    ResponseText response;
    Side side{};
    Relationship relationship{};
    std::vector<ConstraintSpec> specs_w;
    std::vector<ConstraintSpec> specs_l;
};

// Preference-margin pair between a constrained and the original prompt,
// holding the response pair fixed. specs belong to the constrained prompt
// (prompt_hi for up, prompt_lo for down).
struct InterRecord {
    std::string record_id;
    std::string prompt_hi;
    std::string prompt_lo;
    ResponseText chosen;
    ResponseText rejected;
    Direction direction{};
    std::vector<ConstraintSpec> specs;
};

struct MliftRecord {
    std::string record_id;
    std::string prompt;
    ResponseText preferred;
    ResponseText dispreferred;
    MliftCategory category{};
    std::vector<ConstraintSpec> specs;  // empty for category == original
};

struct SkipReport {
    std::string record_id;
    std::string stage;
    std::string reason;
};

// The combined dataset: per surviving source record exactly one bt entry,
// two intra entries and two inter entries.
struct MaplDataset {
    std::vector<PreferenceRecord> bt;
    std::vector<IntraRecord> intra;
    std::vector<InterRecord> inter;
    std::vector<SkipReport> skips;
    std::uint64_t seed = 0;
};

struct MliftDataset {
    std::vector<MliftRecord> records;
    std::vector<SkipReport> skips;
    std::uint64_t seed = 0;
};

}  // namespace mapl
