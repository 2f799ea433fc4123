#pragma once
// Exception types shared across the library. Everything derives from
// hdlagent::Error so callers can catch the whole family at once.

#include <stdexcept>
#include <string>

namespace hdlagent {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A file or string could not be parsed at all (bad JSON, no module header, ...).
struct ParseError : Error {
    using Error::Error;
};

// A parsed value violates an invariant. `field` names the offending field.
struct ValidationError : Error {
    std::string field;
    ValidationError(std::string field_name, const std::string& message)
        : Error(field_name + ": " + message), field(std::move(field_name)) {}
};

struct IoError : Error {
    using Error::Error;
};

// LLM provider failures. Retries for transient kinds happen inside the
// backend; what escapes here is final.
struct BackendError : Error {
    enum class Kind { network, http_status, rate_limited, malformed_response };
    Kind kind;
    BackendError(Kind k, const std::string& message) : Error(message), kind(k) {}
};

struct EmptyQuestion : Error {
    EmptyQuestion() : Error("question must be non-empty") {}
};

// Repair queries require a stage that iterates (compile or fixes).
struct StageTooLow : Error {
    using Error::Error;
};

struct EmptyError : Error {
    EmptyError() : Error("compiler error text must be non-empty") {}
};

// The response contained no extractable code region; the repair loop counts
// the iteration as consumed.
struct NoCodeFound : Error {
    using Error::Error;
};

struct UnknownPort : Error {
    using Error::Error;
};

struct NameCollision : Error {
    using Error::Error;
};

// Port signature sets differ; message carries the diff.
struct IoMismatch : Error {
    using Error::Error;
};

struct AmbiguousTop : Error {
    using Error::Error;
};

struct MalformedTest : Error {
    using Error::Error;
};

struct InvalidGateCount : Error {
    using Error::Error;
};

}  // namespace hdlagent
