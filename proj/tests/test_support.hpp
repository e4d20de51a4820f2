#pragma once

#include "asrfix/g2p.hpp"

#include <string>
#include <vector>

namespace testsupport {

inline std::string data_path(const std::string& name) {
    return std::string(ASRFIX_DATA_DIR) + "/" + name;
}

inline const asrfix::Lexicon& lexicon() {
    static asrfix::Lexicon lex = asrfix::Lexicon::load_file(data_path("lexicon.dict"));
    return lex;
}

inline std::vector<asrfix::Phoneme> phones(std::initializer_list<const char*> symbols) {
    std::vector<asrfix::Phoneme> out;
    for (const char* s : symbols) out.push_back(asrfix::Phoneme{s});
    return out;
}

inline std::vector<std::string> symbols(const std::vector<asrfix::Phoneme>& phonemes) {
    std::vector<std::string> out;
    out.reserve(phonemes.size());
    for (const auto& p : phonemes) out.push_back(p.symbol);
    return out;
}

} // namespace testsupport
