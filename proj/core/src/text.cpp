#include "mapl/text.hpp"

namespace mapl {

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

namespace {

bool is_ascii_punct(char c) {
    const unsigned char u = static_cast<unsigned char>(c);
    return (u >= '!' && u <= '/') || (u >= ':' && u <= '@') || (u >= '[' && u <= '`') ||
           (u >= '{' && u <= '~');
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

int word_count(std::string_view text) {
    int count = 0;
    bool in_run = false;
    for (char c : text) {
        if (is_ascii_space(c)) {
            in_run = false;
        } else if (!in_run) {
            in_run = true;
            ++count;
        }
    }
    return count;
}

int sentence_count(std::string_view text) {
    int count = 0;
    bool fragment_live = false;
    for (char c : text) {
        if (is_terminator(c)) {
            if (fragment_live) ++count;
            fragment_live = false;
        } else if (!is_ascii_space(c)) {
            fragment_live = true;
        }
    }
    if (fragment_live) ++count;
    return count;
}

std::string normalize_token(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        if (is_ascii_punct(c)) continue;
        out.push_back(ascii_lower(c));
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_ascii_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_ascii_space(text[i])) ++i;
        if (i > start) {
            std::string token = normalize_token(text.substr(start, i - start));
            if (!token.empty()) tokens.push_back(std::move(token));
        }
    }
    return tokens;
}

ResponseText::ResponseText(std::string text)
    : text_(std::move(text)),
      word_count_(mapl::word_count(text_)),
      sentence_count_(mapl::sentence_count(text_)),
      tokens_(tokenize(text_)) {
    for (const auto& token : tokens_) ++token_counts_[token];
    if (!tokens_.empty()) first_token_ = tokens_.front();
}

}  // namespace mapl
