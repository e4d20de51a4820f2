#pragma once

#include <stdexcept>
#include <string>

namespace asrfix {

// Malformed input file (lexicon, catalog, index, corpus).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, size_t line = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    size_t line() const { return line_; }

private:
    size_t line_;
};

// A caller violated an operation's precondition (empty token, empty query, ...).
class InvalidInput : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Index construction failure (duplicate ids, dimension mismatch).
class BuildError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Embedding service or index lookup failure.
class RetrievalError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Illegal dialogue state transition; message names the offending edge.
class StateError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// External variation generator failure during augmentation.
class GenerationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace asrfix
