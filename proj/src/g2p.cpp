#include "asrfix/g2p.hpp"

#include "asrfix/errors.hpp"
#include "asrfix/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace asrfix {

std::string PhonemePhrase::text() const { return join(tokens); }

Lexicon Lexicon::load(std::istream& in) {
    Lexicon lex;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.rfind(";;;", 0) == 0) continue;
        // strip trailing CR from CRLF files
        if (line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        std::istringstream iss(line);
        std::string word;
        iss >> word;
        std::vector<Phoneme> phones;
        std::string sym;
        while (iss >> sym) phones.push_back(Phoneme{sym});
        if (phones.empty())
            throw ParseError("lexicon entry without phonemes: \"" + word + "\"", lineno);

        // "WORD(2)" alternates are skipped; only the first pronunciation is kept
        auto paren = word.find('(');
        if (paren != std::string::npos) continue;
        std::string key = to_upper(word);
        lex.entries_.emplace(std::move(key), std::move(phones));
    }
    return lex;
}

Lexicon Lexicon::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open lexicon file: " + path);
    return load(in);
}

const std::vector<Phoneme>* Lexicon::lookup(const std::string& word) const {
    auto it = entries_.find(to_upper(word));
    return it == entries_.end() ? nullptr : &it->second;
}

const std::unordered_map<std::string, std::vector<std::string>>&
Lexicon::words_by_initial_phoneme() const {
    if (by_initial_.empty() && !entries_.empty()) {
        for (const auto& [word, phones] : entries_)
            by_initial_[phones.front().symbol].push_back(to_lower(word));
        for (auto& [sym, words] : by_initial_)
            std::sort(words.begin(), words.end());
    }
    return by_initial_;
}

std::optional<std::string> number_word(long value) {
    static const std::array<const char*, 21> small = {
        "zero", "one",    "two",    "three",    "four",     "five",    "six",
        "seven", "eight",  "nine",   "ten",      "eleven",   "twelve",  "thirteen",
        "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};
    static const std::array<const char*, 10> tens = {
        "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"};
    if (value >= 0 && value <= 20) return small[static_cast<size_t>(value)];
    if (value > 20 && value <= 90 && value % 10 == 0)
        return tens[static_cast<size_t>(value / 10)];
    return std::nullopt;
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_rule_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// Spell a digit-bearing token out as words: "3" -> "three", "30" -> "thirty",
// "123" -> "one two three".
std::vector<std::string> digits_to_words(const std::string& digits) {
    long value = 0;
    bool overflow = digits.size() > 9;
    if (!overflow)
        for (char c : digits) value = value * 10 + (c - '0');
    if (!overflow)
        if (auto w = number_word(value)) return {*w};
    std::vector<std::string> words;
    for (char c : digits) words.push_back(*number_word(c - '0'));
    return words;
}

void append_rule_phonemes(const Lexicon& lexicon, const std::string& word,
                          std::vector<Phoneme>& out);

// Deterministic letter-to-sound fallback for out-of-lexicon words.
void letter_to_sound(const Lexicon& lexicon, std::string word, std::vector<Phoneme>& out) {
    // trailing silent e
    if (word.size() > 2 && word.back() == 'e' && !is_rule_vowel(word[word.size() - 2]))
        word.pop_back();

    struct Digraph { const char* graph; const char* p1; const char* p2; };
    static const std::array<Digraph, 15> digraphs = {{
        {"sh", "SH", nullptr}, {"ch", "CH", nullptr}, {"th", "TH", nullptr},
        {"ph", "F", nullptr},  {"ck", "K", nullptr},  {"wh", "W", nullptr},
        {"qu", "K", "W"},      {"ng", "NG", nullptr}, {"ee", "IY1", nullptr},
        {"oo", "UW1", nullptr}, {"ea", "IY1", nullptr}, {"ai", "EY1", nullptr},
        {"ay", "EY1", nullptr}, {"oi", "OY1", nullptr}, {"ou", "AW1", nullptr},
    }};

    size_t i = 0;
    while (i < word.size()) {
        char c = word[i];
        if (is_digit(c)) {
            for (const auto& w : digits_to_words(std::string(1, c)))
                append_rule_phonemes(lexicon, w, out);
            ++i;
            continue;
        }
        if (i + 1 < word.size()) {
            bool matched = false;
            for (const auto& d : digraphs) {
                if (c == d.graph[0] && word[i + 1] == d.graph[1]) {
                    out.push_back(Phoneme{d.p1});
                    if (d.p2) out.push_back(Phoneme{d.p2});
                    i += 2;
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
        }
        switch (c) {
            case 'a': out.push_back(Phoneme{"AE1"}); break;
            case 'e': out.push_back(Phoneme{"EH1"}); break;
            case 'i': out.push_back(Phoneme{"IH1"}); break;
            case 'o': out.push_back(Phoneme{"AA1"}); break;
            case 'u': out.push_back(Phoneme{"AH1"}); break;
            case 'b': out.push_back(Phoneme{"B"}); break;
            case 'c':
                // soft c before e/i/y
                if (i + 1 < word.size() &&
                    (word[i + 1] == 'e' || word[i + 1] == 'i' || word[i + 1] == 'y'))
                    out.push_back(Phoneme{"S"});
                else
                    out.push_back(Phoneme{"K"});
                break;
            case 'd': out.push_back(Phoneme{"D"}); break;
            case 'f': out.push_back(Phoneme{"F"}); break;
            case 'g': out.push_back(Phoneme{"G"}); break;
            case 'h': out.push_back(Phoneme{"HH"}); break;
            case 'j': out.push_back(Phoneme{"JH"}); break;
            case 'k': out.push_back(Phoneme{"K"}); break;
            case 'l': out.push_back(Phoneme{"L"}); break;
            case 'm': out.push_back(Phoneme{"M"}); break;
            case 'n': out.push_back(Phoneme{"N"}); break;
            case 'p': out.push_back(Phoneme{"P"}); break;
            case 'q': out.push_back(Phoneme{"K"}); break;
            case 'r': out.push_back(Phoneme{"R"}); break;
            case 's': out.push_back(Phoneme{"S"}); break;
            case 't': out.push_back(Phoneme{"T"}); break;
            case 'v': out.push_back(Phoneme{"V"}); break;
            case 'w': out.push_back(Phoneme{"W"}); break;
            case 'x': out.push_back(Phoneme{"K"}); out.push_back(Phoneme{"S"}); break;
            case 'y': out.push_back(Phoneme{i == 0 ? "Y" : "IY0"}); break;
            case 'z': out.push_back(Phoneme{"Z"}); break;
            default: break; // apostrophes and anything else are silent
        }
        ++i;
    }
}

void append_rule_phonemes(const Lexicon& lexicon, const std::string& word,
                          std::vector<Phoneme>& out) {
    if (const auto* p = lexicon.lookup(word)) {
        out.insert(out.end(), p->begin(), p->end());
        return;
    }
    letter_to_sound(lexicon, word, out);
}

} // namespace

std::vector<Phoneme> phonemize_token(const Lexicon& lexicon, const std::string& token) {
    std::string norm = normalize_text(token);
    if (norm.empty() || norm.find(' ') != std::string::npos ||
        std::none_of(norm.begin(), norm.end(),
                     [](unsigned char c) { return std::isalnum(c); }))
        throw InvalidInput("invalid token for phonemization: \"" + token + "\"");

    std::vector<Phoneme> out;
    if (std::all_of(norm.begin(), norm.end(), is_digit)) {
        for (const auto& w : digits_to_words(norm)) append_rule_phonemes(lexicon, w, out);
    } else {
        append_rule_phonemes(lexicon, norm, out);
    }
    if (out.empty()) out.push_back(Phoneme{"AH0"}); // unreachable for alnum tokens
    return out;
}

PhonemePhrase phonemize_phrase(const Lexicon& lexicon, const std::string& text) {
    std::vector<std::string> tokens = tokenize(text);
    if (tokens.empty()) throw InvalidInput("phrase is empty after normalization");

    PhonemePhrase phrase;
    phrase.tokens = std::move(tokens);
    for (const auto& tok : phrase.tokens) {
        size_t begin = phrase.phonemes.size();
        auto phones = phonemize_token(lexicon, tok);
        phrase.phonemes.insert(phrase.phonemes.end(), phones.begin(), phones.end());
        phrase.spans.emplace_back(begin, phrase.phonemes.size());
    }
    return phrase;
}

} // namespace asrfix
