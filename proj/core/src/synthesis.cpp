#include "mapl/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "mapl/error.hpp"
#include "mapl/lexicon.hpp"

namespace mapl {

namespace detail {

namespace {
const std::vector<std::string> kCorpusVocab = {
    "the", "a", "an", "quiet", "river", "bends",
    "toward", "old", "mill", "where", "stones", "remember",
    "every", "flood", "morning", "light", "settles", "over",
    "fields", "like", "thin", "glass", "farmers", "mend",
    "fences", "and", "count", "their", "herds", "before",
    "noon", "children", "trace", "maps", "of", "winding",
    "paths", "behind", "barn", "swallows", "stitch", "sky",
    "with", "quick", "dark", "loops", "rain", "walks",
    "in", "from", "west", "smelling", "cedar", "wet",
    "earth", "lanterns", "sway", "on", "porch", "hooks",
    "long", "after", "dusk", "bread", "cools", "windowsill",
    "beside", "jars", "honey", "clocks", "tick", "softly",
    "through", "rooms", "nobody", "visits", "letters", "wait",
    "drawer", "tied", "string", "orchard", "keeps", "its",
    "own", "calendar", "apples", "drop", "when", "they",
    "choose", "fog", "folds", "valley", "into", "single",
    "grey", "thought", "miller", "hums", "tune", "no",
    "one", "taught", "him", "geese", "argue", "about",
    "nothing", "cross", "water", "ferns", "uncurl", "shade",
    "stone", "bridge", "moss", "writes", "slow", "green",
    "history", "wall", "evening", "settle", "gather", "low",
    "woodsmoke", "drifts", "past", "gates", "while", "windows",
    "hold", "small", "warm", "squares", "night",
};
}  // namespace

std::span<const std::string> corpus_vocabulary() { return kCorpusVocab; }

}  // namespace detail

std::span<const Family> SynthesisConfig::families() const {
    if (universe.empty()) return all_families();
    return universe;
}

std::span<const std::string> SynthesisConfig::decoys() const {
    if (lexicon.empty()) return default_lexicon();
    return lexicon;
}

void SynthesisConfig::validate() const {
    const auto n = static_cast<int>(families().size());
    if (k_min < 1 || k_min > k_max || k_max > n)
        raise(Errc::config_error, "synthesis: need 1 <= k_min <= k_max <= " + std::to_string(n));
    if (max_retries < 1) raise(Errc::config_error, "synthesis: max_retries must be >= 1");
}

namespace {

enum class Pattern { all, at_least_one };

struct GeneratedPrompt {
    std::string prompt;
    std::vector<ConstraintSpec> specs;
};

// One Generate call of the intra-sample construction: select families, build
// per-family conditions for a single response, generate every instruction.
// Any infeasible family fails the attempt; the family subset (and the flipped
// subset for "at_least_one") is resampled up to cfg.max_retries times.
std::optional<GeneratedPrompt> generate_single(const std::string& base_prompt,
                                               const ResponseText& response, Pattern pattern,
                                               bool target, const SynthesisConfig& cfg, Rng& rng) {
    for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
        const int k = static_cast<int>(rng.randint(cfg.k_min, cfg.k_max));
        const std::vector<Family> families = sample_family_subset(k, cfg.families(), rng);
        unsigned long long mask = ~0ull;  // "all": every family carries the target flag
        if (pattern == Pattern::at_least_one)
            mask = static_cast<unsigned long long>(rng.randint(1, (1ll << k) - 1));

        std::vector<ConstraintSpec> specs;
        specs.reserve(families.size());
        bool feasible = true;
        for (int i = 0; i < k && feasible; ++i) {
            const bool flag = ((mask >> i) & 1u) ? target : !target;
            const ConditionedArg arg{response, flag};
            GenerationOutcome outcome =
                generate_instruction(families[i], std::span(&arg, 1), cfg.decoys(), rng);
            if (!outcome)
                feasible = false;
            else
                specs.push_back(std::move(*outcome));
        }
        if (!feasible) continue;
        return GeneratedPrompt{compose_prompt(base_prompt, specs), std::move(specs)};
    }
    return std::nullopt;
}

// One Generate call of the inter-sample construction: the primary response is
// conditioned on `target` for every family; a nonempty random subset flips
// the secondary response's flag.
std::optional<GeneratedPrompt> generate_pair(const std::string& base_prompt,
                                             const ResponseText& primary,
                                             const ResponseText& secondary, bool target,
                                             const SynthesisConfig& cfg, Rng& rng) {
    for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
        const int k = static_cast<int>(rng.randint(cfg.k_min, cfg.k_max));
        const std::vector<Family> families = sample_family_subset(k, cfg.families(), rng);
        const auto mask = static_cast<unsigned long long>(rng.randint(1, (1ll << k) - 1));

        std::vector<ConstraintSpec> specs;
        specs.reserve(families.size());
        bool feasible = true;
        for (int i = 0; i < k && feasible; ++i) {
            const bool secondary_flag = ((mask >> i) & 1u) ? !target : target;
            const ConditionedArg args[2] = {{primary, target}, {secondary, secondary_flag}};
            GenerationOutcome outcome =
                generate_instruction(families[i], args, cfg.decoys(), rng);
            if (!outcome)
                feasible = false;
            else
                specs.push_back(std::move(*outcome));
        }
        if (!feasible) continue;
        return GeneratedPrompt{compose_prompt(base_prompt, specs), std::move(specs)};
    }
    return std::nullopt;
}

std::optional<IntraRecord> intra_for_side(const PreferenceRecord& rec, Side side,
                                          const SynthesisConfig& cfg, Rng& rng) {
    const ResponseText& response = side == Side::chosen ? rec.chosen : rec.rejected;
    const Relationship rel =
        rng.coin() ? Relationship::all_true_vs_some_false : Relationship::some_true_vs_all_false;

    std::optional<GeneratedPrompt> win;
    std::optional<GeneratedPrompt> lose;
    if (rel == Relationship::all_true_vs_some_false) {
        win = generate_single(rec.prompt, response, Pattern::all, true, cfg, rng);
        lose = generate_single(rec.prompt, response, Pattern::at_least_one, false, cfg, rng);
    } else {
        win = generate_single(rec.prompt, response, Pattern::at_least_one, true, cfg, rng);
        lose = generate_single(rec.prompt, response, Pattern::all, false, cfg, rng);
    }
    if (!win || !lose) return std::nullopt;

    IntraRecord out;
    out.record_id = rec.record_id + ".intra." + to_string(side);
    out.prompt_w = std::move(win->prompt);
    out.prompt_l = std::move(lose->prompt);
    out.response = response;
    out.side = side;
    out.relationship = rel;
    out.specs_w = std::move(win->specs);
    out.specs_l = std::move(lose->specs);
    return out;
}

}  // namespace

std::optional<std::pair<IntraRecord, IntraRecord>> synthesize_intra(const PreferenceRecord& rec,
                                                                    const SynthesisConfig& cfg,
                                                                    Rng& rng) {
    cfg.validate();
    auto first = intra_for_side(rec, Side::chosen, cfg, rng);
    if (!first) return std::nullopt;
    auto second = intra_for_side(rec, Side::rejected, cfg, rng);
    if (!second) return std::nullopt;
    return std::make_pair(std::move(*first), std::move(*second));
}

std::optional<std::pair<InterRecord, InterRecord>> synthesize_inter(const PreferenceRecord& rec,
                                                                    const SynthesisConfig& cfg,
                                                                    Rng& rng) {
    cfg.validate();
    auto up = generate_pair(rec.prompt, rec.chosen, rec.rejected, true, cfg, rng);
    if (!up) return std::nullopt;
    auto down = generate_pair(rec.prompt, rec.chosen, rec.rejected, false, cfg, rng);
    if (!down) return std::nullopt;

    InterRecord up_rec;
    up_rec.record_id = rec.record_id + ".inter.up";
    up_rec.prompt_hi = std::move(up->prompt);
    up_rec.prompt_lo = rec.prompt;
    up_rec.chosen = rec.chosen;
    up_rec.rejected = rec.rejected;
    up_rec.direction = Direction::up;
    up_rec.specs = std::move(up->specs);

    InterRecord down_rec;
    down_rec.record_id = rec.record_id + ".inter.down";
    down_rec.prompt_hi = rec.prompt;
    down_rec.prompt_lo = std::move(down->prompt);
    down_rec.chosen = rec.chosen;
    down_rec.rejected = rec.rejected;
    down_rec.direction = Direction::down;
    down_rec.specs = std::move(down->specs);

    return std::make_pair(std::move(up_rec), std::move(down_rec));
}

std::optional<std::pair<MliftRecord, MliftRecord>> synthesize_mlift(const PreferenceRecord& rec,
                                                                    const SynthesisConfig& cfg,
                                                                    Rng& rng) {
    cfg.validate();
    // follow_kept: chosen satisfies everything, rejected breaks something.
    auto kept = generate_pair(rec.prompt, rec.chosen, rec.rejected, true, cfg, rng);
    if (!kept) return std::nullopt;
    // follow_reversed: rejected satisfies everything, chosen breaks something,
    // and the preference label flips.
    auto reversed = generate_pair(rec.prompt, rec.rejected, rec.chosen, true, cfg, rng);
    if (!reversed) return std::nullopt;

    MliftRecord kept_rec;
    kept_rec.record_id = rec.record_id + ".mlift.kept";
    kept_rec.prompt = std::move(kept->prompt);
    kept_rec.preferred = rec.chosen;
    kept_rec.dispreferred = rec.rejected;
    kept_rec.category = MliftCategory::follow_kept;
    kept_rec.specs = std::move(kept->specs);

    MliftRecord rev_rec;
    rev_rec.record_id = rec.record_id + ".mlift.reversed";
    rev_rec.prompt = std::move(reversed->prompt);
    rev_rec.preferred = rec.rejected;
    rev_rec.dispreferred = rec.chosen;
    rev_rec.category = MliftCategory::follow_reversed;
    rev_rec.specs = std::move(reversed->specs);

    return std::make_pair(std::move(kept_rec), std::move(rev_rec));
}

std::pair<std::vector<PreferenceRecord>, std::vector<PreferenceRecord>> split_corpus(
    std::span<const PreferenceRecord> corpus, double ratio, Rng& rng) {
    if (!(ratio > 0.0 && ratio < 1.0))
        raise(Errc::invalid_argument, "split_corpus: ratio must be in (0, 1)");
    if (corpus.size() < 2)
        raise(Errc::invalid_argument, "split_corpus: need at least 2 records");

    const std::size_t n = corpus.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t j = i + rng.below(n - i);
        std::swap(order[i], order[j]);
    }

    auto n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

    std::vector<std::size_t> train_idx(order.begin(), order.begin() + n_train);
    std::vector<std::size_t> eval_idx(order.begin() + n_train, order.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(eval_idx.begin(), eval_idx.end());

    std::vector<PreferenceRecord> train, eval;
    train.reserve(train_idx.size());
    eval.reserve(eval_idx.size());
    for (auto i : train_idx) train.push_back(corpus[i]);
    for (auto i : eval_idx) eval.push_back(corpus[i]);
    return {std::move(train), std::move(eval)};
}

EvalIfResult build_eval_if(std::span<const PreferenceRecord> eval_set, const SynthesisConfig& cfg,
                           std::uint64_t seed) {
    EvalIfResult out;
    for (const auto& rec : eval_set) {
        Rng rng = derive_rng(seed, rec.record_id, "eval_if");
        auto pair = synthesize_intra(rec, cfg, rng);
        if (!pair) {
            out.skips.push_back({rec.record_id, "eval_if", "infeasible after retries"});
            continue;
        }
        out.records.push_back(std::move(pair->first));
        out.records.push_back(std::move(pair->second));
    }
    return out;
}

MaplDataset build_mapl_dataset(std::span<const PreferenceRecord> train, const SynthesisConfig& cfg,
                               std::uint64_t seed) {
    if (train.empty()) raise(Errc::invalid_argument, "build_mapl_dataset: empty train split");
    MaplDataset out;
    out.seed = seed;
    for (const auto& rec : train) {
        Rng intra_rng = derive_rng(seed, rec.record_id, "intra");
        auto intra = synthesize_intra(rec, cfg, intra_rng);
        if (!intra) {
            out.skips.push_back({rec.record_id, "intra", "infeasible after retries"});
            continue;
        }
        Rng inter_rng = derive_rng(seed, rec.record_id, "inter");
        auto inter = synthesize_inter(rec, cfg, inter_rng);
        if (!inter) {
            out.skips.push_back({rec.record_id, "inter", "infeasible after retries"});
            continue;
        }
        out.bt.push_back(rec);
        out.intra.push_back(std::move(intra->first));
        out.intra.push_back(std::move(intra->second));
        out.inter.push_back(std::move(inter->first));
        out.inter.push_back(std::move(inter->second));
    }
    return out;
}

MliftDataset build_mlift_dataset(std::span<const PreferenceRecord> train,
                                 const SynthesisConfig& cfg, std::uint64_t seed) {
    MliftDataset out;
    out.seed = seed;
    for (const auto& rec : train) {
        Rng rng = derive_rng(seed, rec.record_id, "mlift");
        auto pair = synthesize_mlift(rec, cfg, rng);
        if (!pair) {
            out.skips.push_back({rec.record_id, "mlift", "infeasible after retries"});
            continue;
        }
        MliftRecord original;
        original.record_id = rec.record_id + ".mlift.original";
        original.prompt = rec.prompt;
        original.preferred = rec.chosen;
        original.dispreferred = rec.rejected;
        original.category = MliftCategory::original;
        out.records.push_back(std::move(original));
        out.records.push_back(std::move(pair->first));
        out.records.push_back(std::move(pair->second));
    }
    return out;
}

namespace {

std::string build_response_text(int words, int sentences, const std::string& first_word,
                                const std::string& marker, const std::string& shared, Rng& rng) {
    const auto vocab = detail::corpus_vocabulary();
    std::vector<std::string> tokens;
    tokens.reserve(static_cast<std::size_t>(words));
    tokens.push_back(first_word);
    tokens.push_back(marker);
    tokens.push_back(shared);
    for (int i = 3; i < words; ++i) tokens.push_back(vocab[rng.below(vocab.size())]);

    const char terminators[3] = {'.', '!', '?'};
    const int base = words / sentences;
    const int extra = words % sentences;
    std::string text;
    std::size_t cursor = 0;
    for (int s = 0; s < sentences; ++s) {
        const int len = base + (s < extra ? 1 : 0);
        for (int w = 0; w < len; ++w) {
            if (!text.empty() && text.back() != ' ') text += ' ';
            text += tokens[cursor++];
        }
        text += terminators[rng.below(3)];
    }
    return text;
}

}  // namespace

std::vector<PreferenceRecord> generate_synthetic_corpus(int n, Rng& rng) {
    if (n < 1) raise(Errc::invalid_argument, "generate_synthetic_corpus: n must be >= 1");
    const auto vocab = detail::corpus_vocabulary();
    std::vector<PreferenceRecord> corpus;
    corpus.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        char id[24];
        std::snprintf(id, sizeof(id), "syn-%05d", i);

        const int wc_w = static_cast<int>(rng.randint(10, 200));
        int wc_l = static_cast<int>(rng.randint(10, 200));
        while (wc_l == wc_w) wc_l = static_cast<int>(rng.randint(10, 200));

        // Sentence counts >= 2 keep every at-most family violable; distinct
        // counts keep both inter directions feasible for sentence families.
        const int sc_w = static_cast<int>(rng.randint(2, std::min(20, wc_w)));
        int sc_l = static_cast<int>(rng.randint(2, std::min(20, wc_l)));
        while (sc_l == sc_w) sc_l = static_cast<int>(rng.randint(2, std::min(20, wc_l)));

        const std::string& fw = vocab[rng.below(vocab.size())];
        const std::string* fl = &vocab[rng.below(vocab.size())];
        while (*fl == fw) fl = &vocab[rng.below(vocab.size())];

        const std::string suffix = std::to_string(i);
        PreferenceRecord rec;
        rec.record_id = id;
        rec.prompt = "Write field note " + suffix + " about the " +
                     vocab[rng.below(vocab.size())] + " near the " +
                     vocab[rng.below(vocab.size())] + ".";
        rec.chosen = ResponseText(
            build_response_text(wc_w, sc_w, fw, "ck" + suffix, "bo" + suffix, rng));
        rec.rejected = ResponseText(
            build_response_text(wc_l, sc_l, *fl, "rk" + suffix, "bo" + suffix, rng));
        corpus.push_back(std::move(rec));
    }
    return corpus;
}

}  // namespace mapl
