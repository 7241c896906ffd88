#pragma once

#include <stdexcept>
#include <string>

namespace vrigid {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfDomain : Error {
    using Error::Error;
};
struct EvalError : Error {
    using Error::Error;
};
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line(line),
          column(column) {}
    explicit ParseError(const std::string& what) : Error(what), line(0), column(0) {}
    std::size_t line;
    std::size_t column;
};
struct UsageError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};
struct DegenerateSegment : Error {
    using Error::Error;
};
struct DegenerateChord : Error {
    using Error::Error;
};
struct DegenerateFamily : Error {
    using Error::Error;
};
struct InvalidScale : Error {
    using Error::Error;
};
struct NotOrthogonal : Error {
    using Error::Error;
};
struct FitFailed : Error {
    using Error::Error;
};
struct CoverageTooLow : Error {
    using Error::Error;
};
struct NormalizationImpossible : Error {
    using Error::Error;
};

}  // namespace vrigid
