#pragma once

#include <stdexcept>
#include <string>

namespace lad {

// Raised when an input file cannot be parsed (bad cell, ragged row,
// missing column, malformed score file). The message names the offending
// row or column where one exists.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lad
