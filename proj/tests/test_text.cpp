#include <doctest.h>

#include "mapl/text.hpp"

using namespace mapl;

TEST_CASE("word_count counts maximal non-whitespace runs") {
    CHECK(word_count("") == 0);
    CHECK(word_count("   \t\n") == 0);
    CHECK(word_count("one") == 1);
    CHECK(word_count("one two three") == 3);
    CHECK(word_count("  spaced   out  ") == 2);
    CHECK(word_count("punct-stays one.two") == 2);
    CHECK(word_count("a.b.c") == 1);
}

TEST_CASE("sentence_count counts terminators closing non-empty fragments") {
    CHECK(sentence_count("") == 0);
    CHECK(sentence_count("   ") == 0);
    CHECK(sentence_count("Hello.") == 1);
    CHECK(sentence_count("Hello. World.") == 2);
    CHECK(sentence_count("Hello..") == 1);          // second dot closes nothing
    CHECK(sentence_count("Hello") == 1);            // unterminated trailing fragment
    CHECK(sentence_count("Hi. And then") == 2);
    CHECK(sentence_count("a.b.c") == 3);            // terminators need no whitespace
    CHECK(sentence_count(". . .") == 0);            // only empty fragments
    CHECK(sentence_count("One! Two? Three.") == 3);
}

TEST_CASE("tokenize lowercases and strips punctuation") {
    const auto tokens = tokenize("Sarah went home.");
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0] == "sarah");
    CHECK(tokens[1] == "went");
    CHECK(tokens[2] == "home");

    CHECK(tokenize("--- ...").empty());
    CHECK(tokenize("Don't?") == std::vector<std::string>{"dont"});
}

TEST_CASE("ResponseText precomputes derived statistics") {
    const ResponseText r("The cat sat. The cat ran!");
    CHECK(r.word_count() == 6);
    CHECK(r.sentence_count() == 2);
    CHECK(r.count_of("cat") == 2);
    CHECK(r.count_of("dog") == 0);
    CHECK(r.first_token() == "the");

    const ResponseText empty("");
    CHECK(empty.word_count() == 0);
    CHECK(empty.sentence_count() == 0);
    CHECK(empty.first_token().empty());
}
