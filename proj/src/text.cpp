#include "asrfix/text.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace asrfix {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

} // namespace

std::string to_upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string normalize_text(std::string_view text) {
    std::string lowered = to_lower(text);
    std::string out;
    out.reserve(lowered.size());
    for (size_t i = 0; i < lowered.size(); ++i) {
        char c = lowered[i];
        if (is_alnum(c)) {
            out.push_back(c);
        } else if (c == '\'' && i > 0 && i + 1 < lowered.size() &&
                   is_alnum(lowered[i - 1]) && is_alnum(lowered[i + 1])) {
            out.push_back(c); // don't, o'clock
        } else {
            out.push_back(' ');
        }
    }
    // collapse whitespace and trim
    std::string collapsed;
    collapsed.reserve(out.size());
    bool in_space = true;
    for (char c : out) {
        if (c == ' ') {
            if (!in_space) collapsed.push_back(' ');
            in_space = true;
        } else {
            collapsed.push_back(c);
            in_space = false;
        }
    }
    if (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
    return collapsed;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::istringstream iss(normalize_text(text));
    std::vector<std::string> tokens;
    std::string tok;
    while (iss >> tok) tokens.push_back(tok);
    return tokens;
}

namespace {

template <typename Seq>
size_t edit_distance(const Seq& a, const Seq& b) {
    const size_t m = a.size(), n = b.size();
    std::vector<size_t> prev(n + 1), cur(n + 1);
    std::iota(prev.begin(), prev.end(), size_t{0});
    for (size_t i = 1; i <= m; ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= n; ++j) {
            size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

} // namespace

size_t levenshtein(std::string_view a, std::string_view b) {
    return edit_distance(a, b);
}

size_t word_edit_distance(const std::vector<std::string>& a,
                          const std::vector<std::string>& b) {
    return edit_distance(a, b);
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += sep;
        out += tokens[i];
    }
    return out;
}

} // namespace asrfix
