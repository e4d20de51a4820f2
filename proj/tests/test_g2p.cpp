#include "asrfix/errors.hpp"
#include "asrfix/g2p.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <sstream>

using namespace asrfix;
using testsupport::lexicon;
using testsupport::symbols;

TEST_CASE("lexicon parses CMUdict lines") {
    std::istringstream in(";;; comment\nHOUSE  HH AW1 S\n\nA  AH0\nA(1)  EY1\n");
    Lexicon lex = Lexicon::load(in);
    CHECK(lex.size() == 2);
    REQUIRE(lex.lookup("house") != nullptr);
    CHECK(symbols(*lex.lookup("house")) == std::vector<std::string>{"HH", "AW1", "S"});
    // first variant wins, "A(1)" is skipped
    REQUIRE(lex.lookup("A") != nullptr);
    CHECK(symbols(*lex.lookup("A")) == std::vector<std::string>{"AH0"});
    CHECK(lex.lookup("missing") == nullptr);
}

TEST_CASE("empty stream gives an empty lexicon") {
    std::istringstream in("");
    CHECK(Lexicon::load(in).size() == 0);
}

TEST_CASE("lexicon entry without phonemes is a parse error naming the line") {
    std::istringstream in("HOUSE  HH AW1 S\nBROKEN\n");
    CHECK_THROWS_AS(Lexicon::load(in), ParseError);
    std::istringstream again("HOUSE  HH AW1 S\nBROKEN\n");
    try {
        Lexicon::load(again);
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("shipped lexicon has the documented pronunciations") {
    CHECK(symbols(*lexicon().lookup("house")) == std::vector<std::string>{"HH", "AW1", "S"});
    CHECK(symbols(*lexicon().lookup("horse")) ==
          std::vector<std::string>{"HH", "AO1", "R", "S"});
    CHECK(symbols(*lexicon().lookup("hence")) ==
          std::vector<std::string>{"HH", "EH1", "N", "S"});
}

TEST_CASE("phonemize_token uses the lexicon") {
    CHECK(symbols(phonemize_token(lexicon(), "horse")) ==
          std::vector<std::string>{"HH", "AO1", "R", "S"});
    CHECK(symbols(phonemize_token(lexicon(), "HENCE")) ==
          std::vector<std::string>{"HH", "EH1", "N", "S"});
}

TEST_CASE("out-of-lexicon words get deterministic rule pronunciations") {
    auto first = phonemize_token(lexicon(), "zzkrx");
    CHECK(!first.empty());
    CHECK(phonemize_token(lexicon(), "zzkrx") == first);

    // digraph and silent-e rules
    CHECK(symbols(phonemize_token(lexicon(), "shope")) ==
          std::vector<std::string>{"SH", "AA1", "P"});
    CHECK(symbols(phonemize_token(lexicon(), "thing")) ==
          std::vector<std::string>{"TH", "IH1", "NG"});
    CHECK(symbols(phonemize_token(lexicon(), "cyx")) ==
          std::vector<std::string>{"S", "IY0", "K", "S"});
}

TEST_CASE("digit tokens are spelled out") {
    CHECK(phonemize_token(lexicon(), "3") == *lexicon().lookup("three"));
    auto three_ten = phonemize_token(lexicon(), "310");
    std::vector<Phoneme> expected = *lexicon().lookup("three");
    expected.insert(expected.end(), lexicon().lookup("one")->begin(),
                    lexicon().lookup("one")->end());
    // "310" is not a round number, so each digit is spelled
    auto zero = phonemize_token(lexicon(), "0");
    expected.insert(expected.end(), zero.begin(), zero.end());
    CHECK(three_ten == expected);
    CHECK(phonemize_token(lexicon(), "30") == phonemize_token(lexicon(), "thirty"));
}

TEST_CASE("phonemize_token rejects junk") {
    CHECK_THROWS_AS(phonemize_token(lexicon(), "!!!"), InvalidInput);
    CHECK_THROWS_AS(phonemize_token(lexicon(), ""), InvalidInput);
    CHECK_THROWS_AS(phonemize_token(lexicon(), "two words"), InvalidInput);
}

TEST_CASE("phonemize_phrase aligns tokens and phonemes") {
    PhonemePhrase p = phonemize_phrase(lexicon(), "house");
    CHECK(p.tokens == std::vector<std::string>{"house"});
    CHECK(symbols(p.phonemes) == std::vector<std::string>{"HH", "AW1", "S"});
    REQUIRE(p.spans.size() == 1);
    CHECK(p.spans[0] == std::pair<size_t, size_t>{0, 3});

    PhonemePhrase two = phonemize_phrase(lexicon(), "horse hence");
    CHECK(symbols(two.phonemes) ==
          std::vector<std::string>{"HH", "AO1", "R", "S", "HH", "EH1", "N", "S"});
    REQUIRE(two.spans.size() == 2);
    CHECK(two.spans[0] == std::pair<size_t, size_t>{0, 4});
    CHECK(two.spans[1] == std::pair<size_t, size_t>{4, 8});
    CHECK(two.text() == "horse hence");
}

TEST_CASE("single-token phrase equals phonemize_token") {
    for (const char* word : {"house", "faucet", "zzkrx", "guitar"}) {
        CHECK(phonemize_phrase(lexicon(), word).phonemes == phonemize_token(lexicon(), word));
    }
}

TEST_CASE("phrase spans partition the phoneme sequence") {
    for (const char* text : {"how can i fix a leaky bathroom for sit",
                             "tune an electric guitar", "zzkrx 42 don't"}) {
        PhonemePhrase p = phonemize_phrase(lexicon(), text);
        REQUIRE(p.spans.size() == p.tokens.size());
        size_t cursor = 0;
        for (const auto& [begin, end] : p.spans) {
            CHECK(begin == cursor);
            CHECK(end > begin);
            cursor = end;
        }
        CHECK(cursor == p.phonemes.size());
    }
}

TEST_CASE("phonemize_phrase rejects empty text") {
    CHECK_THROWS_AS(phonemize_phrase(lexicon(), "  ?!  "), InvalidInput);
}

TEST_CASE("number_word covers 0-20 and round tens") {
    CHECK(number_word(0) == "zero");
    CHECK(number_word(13) == "thirteen");
    CHECK(number_word(20) == "twenty");
    CHECK(number_word(90) == "ninety");
    CHECK(!number_word(21).has_value());
    CHECK(!number_word(-1).has_value());
    CHECK(!number_word(100).has_value());
}

TEST_CASE("phoneme helpers") {
    CHECK(Phoneme{"AW1"}.is_vowel());
    CHECK(!Phoneme{"HH"}.is_vowel());
    CHECK(Phoneme{"AW1"}.base() == "AW");
    CHECK(Phoneme{"HH"}.base() == "HH");
}

TEST_CASE("words_by_initial_phoneme buckets are sorted") {
    const auto& buckets = lexicon().words_by_initial_phoneme();
    auto hh = buckets.find("HH");
    REQUIRE(hh != buckets.end());
    CHECK(std::is_sorted(hh->second.begin(), hh->second.end()));
    CHECK(std::find(hh->second.begin(), hh->second.end(), "house") != hh->second.end());
}
