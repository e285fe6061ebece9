#include "mapl/constraints.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "mapl/error.hpp"

namespace mapl {

namespace {

const std::array<Family, kFamilyCount> kAllFamilies = {
    Family::min_words,       Family::max_words,       Family::min_sentences,
    Family::max_sentences,   Family::keyword_include, Family::keyword_exclude,
    Family::keyword_frequency, Family::starts_with,
};

const std::array<std::string, kFamilyCount> kFamilyIds = {
    "min_words",       "max_words",       "min_sentences",     "max_sentences",
    "keyword_include", "keyword_exclude", "keyword_frequency", "starts_with",
};

std::string quoted(const std::string& word) { return "\"" + word + "\""; }

void check_spec(const ConstraintSpec& spec) {
    if (family_uses_threshold(spec.family) && spec.n < 1)
        raise(Errc::malformed_spec, "spec " + family_id(spec.family) + ": threshold must be >= 1");
    if (family_uses_word(spec.family)) {
        if (spec.word.empty() || normalize_token(spec.word) != spec.word)
            raise(Errc::malformed_spec,
                  "spec " + family_id(spec.family) + ": keyword must be a normalized word");
    }
}

// Sorted token set of a response.
std::set<std::string> token_set(const ResponseText& r) {
    std::set<std::string> out;
    for (const auto& [token, count] : r.token_counts()) out.insert(token);
    return out;
}

std::set<std::string> intersect_tokens(std::span<const ConditionedArg> args, bool flag) {
    std::set<std::string> acc;
    bool first = true;
    for (const auto& arg : args) {
        if (arg.must_satisfy != flag) continue;
        std::set<std::string> cur = token_set(arg.response);
        if (first) {
            acc = std::move(cur);
            first = false;
        } else {
            std::set<std::string> kept;
            std::set_intersection(acc.begin(), acc.end(), cur.begin(), cur.end(),
                                  std::inserter(kept, kept.begin()));
            acc = std::move(kept);
        }
    }
    return acc;
}

std::set<std::string> union_tokens(std::span<const ConditionedArg> args, bool flag) {
    std::set<std::string> acc;
    for (const auto& arg : args) {
        if (arg.must_satisfy != flag) continue;
        for (const auto& [token, count] : arg.response.token_counts()) acc.insert(token);
    }
    return acc;
}

bool any_flag(std::span<const ConditionedArg> args, bool flag) {
    return std::any_of(args.begin(), args.end(),
                       [flag](const ConditionedArg& a) { return a.must_satisfy == flag; });
}

// Feasible inclusive threshold range for a count-based family. satisfied(count, n)
// must be monotone in n: "at least" families shrink upward, "at most" downward.
struct ThresholdRange {
    long long lo = 1;
    long long hi = 0;
    bool empty() const { return lo > hi; }
};

long long stat_of(Family family, const ResponseText& r) {
    switch (family) {
        case Family::min_words:
        case Family::max_words:
            return r.word_count();
        case Family::min_sentences:
        case Family::max_sentences:
            return r.sentence_count();
        default:
            raise(Errc::invalid_argument, "stat_of: not a threshold family");
    }
}

bool is_at_least(Family family) {
    return family == Family::min_words || family == Family::min_sentences;
}

ThresholdRange threshold_range(Family family, std::span<const ConditionedArg> args,
                               long long cap) {
    ThresholdRange range{1, cap};
    for (const auto& arg : args) {
        const long long stat = stat_of(family, arg.response);
        if (is_at_least(family)) {
            // satisfy: n <= stat; violate: n >= stat + 1
            if (arg.must_satisfy)
                range.hi = std::min(range.hi, stat);
            else
                range.lo = std::max(range.lo, stat + 1);
        } else {
            // satisfy: n >= stat; violate: n <= stat - 1
            if (arg.must_satisfy)
                range.lo = std::max(range.lo, stat);
            else
                range.hi = std::min(range.hi, stat - 1);
        }
    }
    return range;
}

GenerationOutcome pick_word(Family family, const std::set<std::string>& candidates, Rng& rng) {
    if (candidates.empty()) return std::nullopt;
    std::vector<const std::string*> sorted;
    sorted.reserve(candidates.size());
    for (const auto& w : candidates) sorted.push_back(&w);
    const auto& word = *sorted[rng.below(sorted.size())];
    return make_spec(family, 0, word);
}

GenerationOutcome generate_keyword_include(std::span<const ConditionedArg> args,
                                           std::span<const std::string> lexicon, Rng& rng) {
    std::set<std::string> candidates;
    const std::set<std::string> forbidden = union_tokens(args, false);
    if (any_flag(args, true)) {
        for (const auto& w : intersect_tokens(args, true))
            if (!forbidden.count(w)) candidates.insert(w);
    } else {
        for (const auto& w : lexicon)
            if (!forbidden.count(w)) candidates.insert(w);
    }
    return pick_word(Family::keyword_include, candidates, rng);
}

GenerationOutcome generate_keyword_exclude(std::span<const ConditionedArg> args,
                                           std::span<const std::string> lexicon, Rng& rng) {
    // satisfy: word absent; violate: word present.
    std::set<std::string> candidates;
    const std::set<std::string> absent_from = union_tokens(args, true);
    if (any_flag(args, false)) {
        for (const auto& w : intersect_tokens(args, false))
            if (!absent_from.count(w)) candidates.insert(w);
    } else {
        for (const auto& w : lexicon)
            if (!absent_from.count(w)) candidates.insert(w);
    }
    return pick_word(Family::keyword_exclude, candidates, rng);
}

GenerationOutcome generate_keyword_frequency(std::span<const ConditionedArg> args,
                                             std::span<const std::string> lexicon, Rng& rng) {
    const long long cap = threshold_cap(args);
    std::vector<std::string> words;
    if (any_flag(args, true)) {
        for (const auto& w : intersect_tokens(args, true)) words.push_back(w);
    } else {
        words.assign(lexicon.begin(), lexicon.end());
        std::sort(words.begin(), words.end());
        words.erase(std::unique(words.begin(), words.end()), words.end());
    }

    struct WordRange {
        const std::string* word;
        long long lo, hi;
    };
    std::vector<WordRange> feasible;
    unsigned long long total = 0;
    for (const auto& w : words) {
        long long lo = 1;
        long long hi = cap;
        for (const auto& arg : args) {
            const long long count = arg.response.count_of(w);
            if (arg.must_satisfy)
                hi = std::min(hi, count);  // count >= n
            else
                lo = std::max(lo, count + 1);
        }
        if (lo <= hi) {
            feasible.push_back({&w, lo, hi});
            total += static_cast<unsigned long long>(hi - lo + 1);
        }
    }
    if (total == 0) return std::nullopt;

    unsigned long long idx = rng.below(total);
    for (const auto& wr : feasible) {
        const auto size = static_cast<unsigned long long>(wr.hi - wr.lo + 1);
        if (idx < size) return make_spec(Family::keyword_frequency, wr.lo + static_cast<long long>(idx), *wr.word);
        idx -= size;
    }
    raise(Errc::invalid_argument, "keyword_frequency: index walk out of range");
}

GenerationOutcome generate_starts_with(std::span<const ConditionedArg> args,
                                       std::span<const std::string> lexicon, Rng& rng) {
    std::set<std::string> candidates;
    if (any_flag(args, true)) {
        std::string shared;
        for (const auto& arg : args) {
            if (!arg.must_satisfy) continue;
            const std::string& first = arg.response.first_token();
            if (first.empty()) return std::nullopt;
            if (shared.empty())
                shared = first;
            else if (shared != first)
                return std::nullopt;
        }
        for (const auto& arg : args)
            if (!arg.must_satisfy && arg.response.first_token() == shared) return std::nullopt;
        candidates.insert(shared);
    } else {
        std::set<std::string> firsts;
        for (const auto& arg : args) firsts.insert(arg.response.first_token());
        for (const auto& w : lexicon)
            if (!firsts.count(w)) candidates.insert(w);
    }
    return pick_word(Family::starts_with, candidates, rng);
}

}  // namespace

std::span<const Family> all_families() { return kAllFamilies; }

const std::string& family_id(Family family) { return kFamilyIds[static_cast<int>(family)]; }

std::optional<Family> family_from_id(std::string_view id) {
    for (int i = 0; i < kFamilyCount; ++i)
        if (kFamilyIds[i] == id) return kAllFamilies[i];
    return std::nullopt;
}

bool family_uses_threshold(Family family) {
    switch (family) {
        case Family::min_words:
        case Family::max_words:
        case Family::min_sentences:
        case Family::max_sentences:
        case Family::keyword_frequency:
            return true;
        default:
            return false;
    }
}

bool family_uses_word(Family family) {
    switch (family) {
        case Family::keyword_include:
        case Family::keyword_exclude:
        case Family::keyword_frequency:
        case Family::starts_with:
            return true;
        default:
            return false;
    }
}

std::string render_text(Family family, long long n, const std::string& word) {
    switch (family) {
        case Family::min_words:
            return "Your response should contain at least " + std::to_string(n) + " words.";
        case Family::max_words:
            return "Your response should contain at most " + std::to_string(n) + " words.";
        case Family::min_sentences:
            return "Your response should contain at least " + std::to_string(n) + " sentences.";
        case Family::max_sentences:
            return "Your response should contain at most " + std::to_string(n) + " sentences.";
        case Family::keyword_include:
            return "Your response must include the word " + quoted(word) + ".";
        case Family::keyword_exclude:
            return "Your response must not include the word " + quoted(word) + ".";
        case Family::keyword_frequency:
            return "Your response must include the word " + quoted(word) + " at least " +
                   std::to_string(n) + " times.";
        case Family::starts_with:
            return "Your response must start with the word " + quoted(word) + ".";
    }
    raise(Errc::malformed_spec, "render_text: unknown family");
}

ConstraintSpec make_spec(Family family, long long n, const std::string& word) {
    ConstraintSpec spec;
    spec.family = family;
    spec.n = family_uses_threshold(family) ? n : 0;
    spec.word = family_uses_word(family) ? word : std::string();
    check_spec(spec);
    spec.text = render_text(family, spec.n, spec.word);
    return spec;
}

bool verify(const ConstraintSpec& spec, const ResponseText& response) {
    check_spec(spec);
    switch (spec.family) {
        case Family::min_words:
            return response.word_count() >= spec.n;
        case Family::max_words:
            return response.word_count() <= spec.n;
        case Family::min_sentences:
            return response.sentence_count() >= spec.n;
        case Family::max_sentences:
            return response.sentence_count() <= spec.n;
        case Family::keyword_include:
            return response.count_of(spec.word) >= 1;
        case Family::keyword_exclude:
            return response.count_of(spec.word) == 0;
        case Family::keyword_frequency:
            return response.count_of(spec.word) >= spec.n;
        case Family::starts_with:
            return !response.first_token().empty() && response.first_token() == spec.word;
    }
    raise(Errc::malformed_spec, "verify: unknown family");
}

long long threshold_cap(std::span<const ConditionedArg> args) {
    long long max_wc = 0;
    for (const auto& arg : args) max_wc = std::max<long long>(max_wc, arg.response.word_count());
    return 10 * max_wc + 10;
}

GenerationOutcome generate_instruction(Family family, std::span<const ConditionedArg> args,
                                       std::span<const std::string> lexicon, Rng& rng) {
    if (args.empty()) raise(Errc::invalid_argument, "generate_instruction: no conditioned args");
    for (const auto& arg : args)
        if (arg.response.text().empty())
            raise(Errc::invalid_argument, "generate_instruction: empty response");

    switch (family) {
        case Family::min_words:
        case Family::max_words:
        case Family::min_sentences:
        case Family::max_sentences: {
            const ThresholdRange range = threshold_range(family, args, threshold_cap(args));
            if (range.empty()) return std::nullopt;
            return make_spec(family, rng.randint(range.lo, range.hi), "");
        }
        case Family::keyword_include:
            return generate_keyword_include(args, lexicon, rng);
        case Family::keyword_exclude:
            return generate_keyword_exclude(args, lexicon, rng);
        case Family::keyword_frequency:
            return generate_keyword_frequency(args, lexicon, rng);
        case Family::starts_with:
            return generate_starts_with(args, lexicon, rng);
    }
    raise(Errc::invalid_argument, "generate_instruction: unknown family");
}

std::vector<Family> sample_family_subset(int k, Rng& rng) {
    return sample_family_subset(k, all_families(), rng);
}

std::vector<Family> sample_family_subset(int k, std::span<const Family> universe, Rng& rng) {
    if (k < 1 || static_cast<std::size_t>(k) > universe.size())
        raise(Errc::invalid_argument,
              "sample_family_subset: k must be in [1, " + std::to_string(universe.size()) + "]");
    std::vector<Family> pool(universe.begin(), universe.end());
    // Partial Fisher-Yates: the first k slots end up a uniform ordered sample.
    for (int i = 0; i < k; ++i) {
        const auto j = i + static_cast<int>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

std::string compose_prompt(const std::string& base_prompt,
                           std::span<const ConstraintSpec> specs) {
    if (specs.empty()) raise(Errc::invalid_argument, "compose_prompt: no specs");
    std::set<Family> seen;
    for (const auto& spec : specs)
        if (!seen.insert(spec.family).second)
            raise(Errc::duplicate_family, "compose_prompt: duplicate family " + family_id(spec.family));
    std::string out = base_prompt + "\n\n";
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (i > 0) out += ' ';
        out += specs[i].text;
    }
    return out;
}

}  // namespace mapl
