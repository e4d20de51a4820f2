#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace asrfix {

/// Lowercase, strip non-alphanumeric characters (intra-word apostrophes
/// survive), collapse runs of whitespace, trim.
std::string normalize_text(std::string_view text);

/// normalize_text followed by a whitespace split.
std::vector<std::string> tokenize(std::string_view text);

/// Character-level Levenshtein distance.
size_t levenshtein(std::string_view a, std::string_view b);

/// Word-level edit distance between two token sequences.
size_t word_edit_distance(const std::vector<std::string>& a,
                          const std::vector<std::string>& b);

std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

std::string to_upper(std::string_view s);
std::string to_lower(std::string_view s);

} // namespace asrfix
