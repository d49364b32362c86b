#pragma once

#include <stdexcept>
#include <string>

namespace ontorag {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text (IRI, OBO, JSON, TSV).
class ParseError : public Error {
public:
    using Error::Error;
};

// Lookup of an IRI or file that does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

// Input that parses but violates a precondition (dimension mismatch,
// duplicate ids, empty store, ...).
class DataError : public Error {
public:
    using Error::Error;
};

// Failure inside a scorer, embedding provider or LLM provider.
class ProviderError : public Error {
public:
    ProviderError(std::string stage, const std::string& message)
        : Error(stage.empty() ? message : stage + ": " + message), stage_(std::move(stage)) {}
    explicit ProviderError(const std::string& message) : ProviderError("", message) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace ontorag
