#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mapl/constraints.hpp"
#include "mapl/error.hpp"
#include "mapl/lexicon.hpp"
#include "mapl/synthesis.hpp"

using namespace mapl;

namespace {

// Response with an exact word count: "w0 w1 ... w{n-1}."
ResponseText words_response(int n) {
    std::string text;
    for (int i = 0; i < n; ++i) {
        if (i) text += ' ';
        text += "w" + std::to_string(i);
    }
    text += '.';
    return ResponseText(text);
}

// Random small response drawn from a fixed pool, for oracle trials.
ResponseText random_response(Rng& rng) {
    static const std::vector<std::string> pool = {"ant",  "bee",  "cow", "dog",  "elk",
                                                  "fox",  "gnu",  "hen", "ibis", "jay",
                                                  "kite", "lark", "mole"};
    const int words = static_cast<int>(rng.randint(1, 30));
    const int sentences = static_cast<int>(rng.randint(1, std::min(5, words)));
    std::string text;
    int emitted = 0;
    for (int s = 0; s < sentences; ++s) {
        const int len = words / sentences + (s < words % sentences ? 1 : 0);
        for (int w = 0; w < len; ++w) {
            if (!text.empty()) text += ' ';
            text += pool[rng.below(pool.size())];
            ++emitted;
        }
        text += '.';
    }
    while (emitted < words) {  // sentences may not divide evenly
        text += " " + pool[rng.below(pool.size())];
        ++emitted;
    }
    return ResponseText(text);
}

// Exhaustively checks whether any parameter satisfies all conditioned args,
// using verify itself as the semantic ground truth.
bool brute_force_feasible(Family family, std::span<const ConditionedArg> args,
                          std::span<const std::string> lexicon) {
    const long long cap = threshold_cap(args);
    const auto consistent = [&](const ConstraintSpec& spec) {
        for (const auto& arg : args)
            if (verify(spec, arg.response) != arg.must_satisfy) return false;
        return true;
    };

    if (family == Family::min_words || family == Family::max_words ||
        family == Family::min_sentences || family == Family::max_sentences) {
        for (long long n = 1; n <= cap; ++n)
            if (consistent(make_spec(family, n, ""))) return true;
        return false;
    }
    if (family == Family::keyword_frequency) {
        std::set<std::string> words(lexicon.begin(), lexicon.end());
        for (const auto& arg : args)
            for (const auto& [token, count] : arg.response.token_counts()) words.insert(token);
        for (const auto& w : words)
            for (long long n = 1; n <= cap; ++n)
                if (consistent(make_spec(family, n, w))) return true;
        return false;
    }
    // Word families: candidates are every token of every arg plus the lexicon.
    std::set<std::string> words(lexicon.begin(), lexicon.end());
    for (const auto& arg : args)
        for (const auto& [token, count] : arg.response.token_counts()) words.insert(token);
    for (const auto& w : words)
        if (consistent(make_spec(family, 0, w))) return true;
    return false;
}

}  // namespace

TEST_CASE("verify: threshold semantics") {
    const ResponseText fifty = words_response(50);
    CHECK(verify(make_spec(Family::min_words, 10, ""), fifty));
    CHECK(verify(make_spec(Family::min_words, 50, ""), fifty));  // "at least" is inclusive
    CHECK_FALSE(verify(make_spec(Family::min_words, 51, ""), fifty));
    CHECK(verify(make_spec(Family::max_words, 50, ""), fifty));
    CHECK_FALSE(verify(make_spec(Family::max_words, 49, ""), fifty));

    const ResponseText three("One two. Three four! Five.");
    CHECK(verify(make_spec(Family::min_sentences, 3, ""), three));
    CHECK_FALSE(verify(make_spec(Family::min_sentences, 4, ""), three));
    CHECK(verify(make_spec(Family::max_sentences, 3, ""), three));
}

TEST_CASE("verify: keyword semantics are case-insensitive token matches") {
    const ResponseText r("Sarah went home.");
    CHECK(verify(make_spec(Family::keyword_include, 0, "sarah"), r));
    CHECK_FALSE(verify(make_spec(Family::keyword_exclude, 0, "sarah"), r));
    CHECK(verify(make_spec(Family::keyword_exclude, 0, "cat"), r));
    CHECK(verify(make_spec(Family::keyword_frequency, 1, "sarah"), r));
    CHECK_FALSE(verify(make_spec(Family::keyword_frequency, 2, "sarah"), r));
    CHECK(verify(make_spec(Family::starts_with, 0, "sarah"), r));
    CHECK_FALSE(verify(make_spec(Family::starts_with, 0, "went"), r));

    // "sarah" must match the token, not a substring of another word.
    const ResponseText other("sarahs home.");
    CHECK_FALSE(verify(make_spec(Family::keyword_include, 0, "sarah"), other));
}

TEST_CASE("verify: malformed specs are rejected") {
    CHECK_THROWS_AS(make_spec(Family::min_words, 0, ""), Error);
    CHECK_THROWS_AS(make_spec(Family::keyword_include, 0, ""), Error);
    CHECK_THROWS_AS(make_spec(Family::keyword_include, 0, "Upper"), Error);
    ConstraintSpec tampered = make_spec(Family::min_words, 3, "");
    tampered.n = -5;
    CHECK_THROWS_AS(verify(tampered, words_response(4)), Error);
}

TEST_CASE("verify is pure: repeated calls agree") {
    const auto spec = make_spec(Family::keyword_frequency, 2, "w1");
    const ResponseText r("w1 w1 w2.");
    const bool first = verify(spec, r);
    for (int i = 0; i < 100; ++i) CHECK(verify(spec, r) == first);
}

TEST_CASE("generate_instruction: min_words single satisfied arg") {
    const ConditionedArg args[] = {{words_response(50), true}};
    Rng rng(42);
    const auto outcome = generate_instruction(Family::min_words, args, default_lexicon(), rng);
    REQUIRE(outcome.has_value());
    CHECK(outcome->n >= 1);
    CHECK(outcome->n <= 50);

    Rng again(42);
    const auto repeat = generate_instruction(Family::min_words, args, default_lexicon(), again);
    REQUIRE(repeat.has_value());
    CHECK(*repeat == *outcome);  // same seed, same outcome
}

TEST_CASE("generate_instruction: min_words bracketed by a violating arg") {
    const ConditionedArg args[] = {{words_response(40), false}, {words_response(120), true}};
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
        Rng rng(seed);
        const auto outcome = generate_instruction(Family::min_words, args, default_lexicon(), rng);
        REQUIRE(outcome.has_value());
        CHECK(outcome->n >= 41);
        CHECK(outcome->n <= 120);
    }
    // Brute force over the window agrees that the feasible set is exactly [41, 120].
    for (long long n = 1; n <= 200; ++n) {
        const auto spec = make_spec(Family::min_words, n, "");
        const bool fits = verify(spec, args[0].response) == args[0].must_satisfy &&
                          verify(spec, args[1].response) == args[1].must_satisfy;
        CHECK(fits == (n >= 41 && n <= 120));
    }
}

TEST_CASE("generate_instruction: contradictory flags give NoSolution") {
    const ConditionedArg args[] = {{words_response(120), false}, {words_response(40), true}};
    Rng rng(7);
    CHECK_FALSE(generate_instruction(Family::min_words, args, default_lexicon(), rng).has_value());
}

TEST_CASE("generate_instruction: precondition violations throw") {
    Rng rng(1);
    CHECK_THROWS_AS(generate_instruction(Family::min_words, {}, default_lexicon(), rng), Error);
    const ConditionedArg empty_response[] = {{ResponseText(""), true}};
    CHECK_THROWS_AS(
        generate_instruction(Family::min_words, empty_response, default_lexicon(), rng), Error);
}

TEST_CASE("sample_family_subset: full set, determinism, bounds") {
    Rng rng(3);
    const auto all = sample_family_subset(kFamilyCount, rng);
    CHECK(std::set<Family>(all.begin(), all.end()).size() == kFamilyCount);

    Rng a(11), b(11);
    CHECK(sample_family_subset(1, a) == sample_family_subset(1, b));

    CHECK_THROWS_AS(sample_family_subset(kFamilyCount + 1, rng), Error);
    CHECK_THROWS_AS(sample_family_subset(0, rng), Error);
}

TEST_CASE("sample_family_subset: inclusion frequency is uniform") {
    // Each family lands in a k=2 subset with probability 1/4; over 10,000
    // draws the count is Binomial(10000, 0.25), sigma ~ 43.3.
    Rng rng(2024);
    std::map<Family, int> counts;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t)
        for (Family f : sample_family_subset(2, rng)) ++counts[f];
    const double expect = trials * 2.0 / kFamilyCount;
    const double sigma = std::sqrt(trials * 0.25 * 0.75);
    for (Family f : all_families()) {
        CHECK(std::abs(counts[f] - expect) <= 3.0 * sigma);
    }
}

TEST_CASE("compose_prompt formats base + instructions") {
    const auto min30 = make_spec(Family::min_words, 30, "");
    CHECK(compose_prompt("Tell me a story.", std::span(&min30, 1)) ==
          "Tell me a story.\n\nYour response should contain at least 30 words.");

    const std::vector<ConstraintSpec> two = {make_spec(Family::min_words, 5, ""),
                                             make_spec(Family::keyword_include, 0, "cat")};
    CHECK(compose_prompt("Q", two) ==
          "Q\n\nYour response should contain at least 5 words. "
          "Your response must include the word \"cat\".");

    CHECK_THROWS_AS(compose_prompt("Q", {}), Error);
    const std::vector<ConstraintSpec> dup = {make_spec(Family::min_words, 5, ""),
                                             make_spec(Family::min_words, 6, "")};
    CHECK_THROWS_AS(compose_prompt("Q", dup), Error);
}

TEST_CASE("property: generated instructions honor every conditioned flag") {
    Rng rng(99);
    int generated = 0, no_solution = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const Family family = all_families()[rng.below(kFamilyCount)];
        std::vector<ConditionedArg> args;
        const int n_args = static_cast<int>(rng.randint(1, 3));
        for (int i = 0; i < n_args; ++i) args.push_back({random_response(rng), rng.coin()});

        const auto outcome = generate_instruction(family, args, default_lexicon(), rng);
        if (!outcome) {
            ++no_solution;
            continue;
        }
        ++generated;
        for (const auto& arg : args) CHECK(verify(*outcome, arg.response) == arg.must_satisfy);
    }
    // Both outcomes must actually occur for the property to mean anything.
    CHECK(generated > 500);
    CHECK(no_solution > 100);
}

TEST_CASE("property: NoSolution agrees with the brute-force feasible set") {
    Rng rng(1234);
    const std::vector<Family> numeric = {Family::min_words, Family::max_words,
                                         Family::min_sentences, Family::max_sentences,
                                         Family::keyword_frequency};
    for (int trial = 0; trial < 300; ++trial) {
        const Family family = numeric[rng.below(numeric.size())];
        std::vector<ConditionedArg> args;
        const int n_args = static_cast<int>(rng.randint(1, 2));
        for (int i = 0; i < n_args; ++i) args.push_back({random_response(rng), rng.coin()});

        const auto outcome = generate_instruction(family, args, default_lexicon(), rng);
        const bool feasible = brute_force_feasible(family, args, default_lexicon());
        CHECK(outcome.has_value() == feasible);
    }
}

TEST_CASE("property: rendered texts never collide across families") {
    Rng rng(555);
    std::map<std::string, Family> seen;
    for (int trial = 0; trial < 10000; ++trial) {
        const Family family = all_families()[rng.below(kFamilyCount)];
        const ConditionedArg arg{random_response(rng), rng.coin()};
        const auto outcome = generate_instruction(family, std::span(&arg, 1),
                                                  default_lexicon(), rng);
        if (!outcome) continue;
        auto [it, inserted] = seen.emplace(outcome->text, family);
        if (!inserted) CHECK(it->second == family);
    }
}

TEST_CASE("default lexicon matches the shipped file and the corpus vocabulary") {
    const auto embedded = default_lexicon();
    REQUIRE(embedded.size() == 512);

    const auto from_file = load_lexicon(MAPL_LEXICON_FILE);
    REQUIRE(from_file.size() == embedded.size());
    for (std::size_t i = 0; i < embedded.size(); ++i) CHECK(from_file[i] == embedded[i]);

    std::set<std::string> decoys(embedded.begin(), embedded.end());
    CHECK(decoys.size() == 512);
    for (const auto& word : detail::corpus_vocabulary()) {
        CHECK(decoys.count(word) == 0);
        CHECK(normalize_token(word) == word);
    }
    for (const auto& word : embedded) CHECK(normalize_token(word) == word);
}
