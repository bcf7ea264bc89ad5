#pragma once

#include <stdexcept>
#include <string>

namespace newsclust {

// Errors caused by bad input data (corpora, files, degenerate training sets).
// The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define NEWSCLUST_DATA_ERROR(Name)                         \
    class Name : public DataError {                        \
    public:                                                \
        explicit Name(const std::string& what)             \
            : DataError(std::string(#Name ": ") + what) {} \
    }

NEWSCLUST_DATA_ERROR(EmptyCorpus);
NEWSCLUST_DATA_ERROR(MissingEmbedding);
NEWSCLUST_DATA_ERROR(DuplicateDocument);
NEWSCLUST_DATA_ERROR(DimensionMismatch);
NEWSCLUST_DATA_ERROR(EmptyPool);
NEWSCLUST_DATA_ERROR(MissingGoldLabel);
NEWSCLUST_DATA_ERROR(DegenerateData);
NEWSCLUST_DATA_ERROR(TooFewMinority);
NEWSCLUST_DATA_ERROR(TooFewClusters);
NEWSCLUST_DATA_ERROR(IdSetMismatch);
NEWSCLUST_DATA_ERROR(MissingField);
NEWSCLUST_DATA_ERROR(UnknownEvent);
NEWSCLUST_DATA_ERROR(BadMagic);
NEWSCLUST_DATA_ERROR(TruncatedFile);
NEWSCLUST_DATA_ERROR(VersionMismatch);
NEWSCLUST_DATA_ERROR(CorruptFile);
NEWSCLUST_DATA_ERROR(InvalidValue);

#undef NEWSCLUST_DATA_ERROR

class ParseError : public DataError {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : DataError("ParseError: " + source + ":" + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Raised by the optimizer when no step along the search direction decreases
// the objective, even after falling back to steepest descent.
class LineSearchFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace newsclust
