#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mapl {

// Text semantics are ASCII-deterministic and locale independent: whitespace
// is the ASCII set, punctuation stripping and lowercasing touch ASCII only,
// and other bytes pass through unchanged.
bool is_ascii_space(char c);

int word_count(std::string_view text);

// Number of {., !, ?} terminators that close a fragment containing at least
// one non-whitespace character; an unterminated trailing fragment counts as
// one sentence.
int sentence_count(std::string_view text);

// Whitespace-delimited tokens, lowercased with punctuation removed. Tokens
// that strip to nothing are dropped.
std::vector<std::string> tokenize(std::string_view text);

std::string normalize_token(std::string_view raw);

// A response with its derived statistics precomputed; immutable, so shared
// use across threads is safe.
class ResponseText {
public:
    ResponseText() = default;
    explicit ResponseText(std::string text);

    const std::string& text() const { return text_; }
    int word_count() const { return word_count_; }
    int sentence_count() const { return sentence_count_; }
    const std::vector<std::string>& tokens() const { return tokens_; }
    const std::map<std::string, int>& token_counts() const { return token_counts_; }

    // First normalized token, or "" for a tokenless response.
    const std::string& first_token() const { return first_token_; }

    int count_of(const std::string& token) const {
        auto it = token_counts_.find(token);
        return it == token_counts_.end() ? 0 : it->second;
    }

    bool operator==(const ResponseText& other) const { return text_ == other.text_; }

private:
    std::string text_;
    int word_count_ = 0;
    int sentence_count_ = 0;
    std::vector<std::string> tokens_;
    std::map<std::string, int> token_counts_;
    std::string first_token_;
};

}  // namespace mapl
