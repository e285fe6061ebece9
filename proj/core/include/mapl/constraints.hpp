#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mapl/rng.hpp"
#include "mapl/text.hpp"

namespace mapl {

// The instruction family roster. Each family can render a verifiable
// instruction and decide, for any response, whether the response follows it.
enum class Family {
    min_words,
    max_words,
    min_sentences,
    max_sentences,
    keyword_include,
    keyword_exclude,
    keyword_frequency,
    starts_with,
};

inline constexpr int kFamilyCount = 8;

std::span<const Family> all_families();
const std::string& family_id(Family family);
std::optional<Family> family_from_id(std::string_view id);

bool family_uses_threshold(Family family);
bool family_uses_word(Family family);

// A concrete instruction: the family, its parameters, and the rendered text.
// rendered_text is a pure function of (family, params).
struct ConstraintSpec {
    Family family{};
    long long n = 0;       // threshold families
    std::string word;      // keyword families
    std::string text;

    bool operator==(const ConstraintSpec& other) const = default;
};

ConstraintSpec make_spec(Family family, long long n, const std::string& word);
std::string render_text(Family family, long long n, const std::string& word);

// One conditioning constraint for instruction generation: the instruction
// must be satisfied (or violated) by this response.
struct ConditionedArg {
    ResponseText response;
    bool must_satisfy = true;
};

// Either a generated spec or no-solution; infeasibility is a value, not an
// error.
using GenerationOutcome = std::optional<ConstraintSpec>;

// True iff the response follows the instruction. Pure and total for any
// response; throws Errc::malformed_spec if the spec itself is invalid.
bool verify(const ConstraintSpec& spec, const ResponseText& response);

// Upper bound of the threshold search window for the given conditioned
// responses. Any feasible threshold lies inside [1, cap].
long long threshold_cap(std::span<const ConditionedArg> args);

// Generates an instruction such that verify(spec, arg.response) ==
// arg.must_satisfy for every arg, with parameters drawn uniformly from the
// feasible set. Returns nullopt when no feasible parameters exist.
GenerationOutcome generate_instruction(Family family, std::span<const ConditionedArg> args,
                                       std::span<const std::string> lexicon, Rng& rng);

// k distinct families drawn uniformly without replacement from the given
// universe (defaults to the full roster).
std::vector<Family> sample_family_subset(int k, Rng& rng);
std::vector<Family> sample_family_subset(int k, std::span<const Family> universe, Rng& rng);

// base_prompt + blank line + instruction texts joined by single spaces.
// Rejects an empty spec list and duplicate families.
std::string compose_prompt(const std::string& base_prompt, std::span<const ConstraintSpec> specs);

}  // namespace mapl
