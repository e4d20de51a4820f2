#pragma once

#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace asrfix {

/// One ARPAbet symbol. Vowels carry a stress digit (AW1, AH0); consonants
/// do not (HH, S).
struct Phoneme {
    std::string symbol;

    bool operator==(const Phoneme&) const = default;

    bool is_vowel() const {
        return !symbol.empty() && symbol.back() >= '0' && symbol.back() <= '2';
    }

    /// Symbol with the stress digit removed.
    std::string base() const {
        if (is_vowel()) return symbol.substr(0, symbol.size() - 1);
        return symbol;
    }
};

/// Token-aligned phoneme sequence for a phrase. spans[i] is the half-open
/// [begin, end) range of tokens[i] inside phonemes; spans are contiguous and
/// exactly partition the sequence.
struct PhonemePhrase {
    std::vector<std::string> tokens;
    std::vector<Phoneme> phonemes;
    std::vector<std::pair<size_t, size_t>> spans;

    std::string text() const;
};

/// Pronunciation lexicon loaded from a CMUdict-format stream. Homograph
/// policy: first-listed pronunciation wins, "WORD(n)" variants are ignored.
class Lexicon {
public:
    /// Parse "WORD  PH PH ..." lines; ";;;" lines are comments.
    /// Throws ParseError (naming the line) when an entry has no phonemes.
    static Lexicon load(std::istream& in);
    static Lexicon load_file(const std::string& path);

    size_t size() const { return entries_.size(); }

    /// Case-insensitive lookup, nullptr when absent.
    const std::vector<Phoneme>* lookup(const std::string& word) const;

    /// All words keyed by their first phoneme, each bucket sorted. Used by
    /// the synthetic noise injector.
    const std::unordered_map<std::string, std::vector<std::string>>&
    words_by_initial_phoneme() const;

private:
    std::unordered_map<std::string, std::vector<Phoneme>> entries_;
    mutable std::unordered_map<std::string, std::vector<std::string>> by_initial_;
};

/// Pronounce a single token: lexicon first, deterministic letter-to-sound
/// rules otherwise. Digits are spelled out ("3" -> "three") before lookup.
/// Throws InvalidInput when the token has no alphanumeric character.
std::vector<Phoneme> phonemize_token(const Lexicon& lexicon, const std::string& token);

/// Pronounce a whole phrase with per-token alignment. Throws InvalidInput
/// when the text normalizes to zero tokens.
PhonemePhrase phonemize_phrase(const Lexicon& lexicon, const std::string& text);

/// Number word for integers 0-20 and round tens up to 90; nullopt otherwise.
std::optional<std::string> number_word(long value);

} // namespace asrfix
