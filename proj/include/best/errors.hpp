#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>

namespace best {

// Caller handed us something that violates a precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A model backend call failed. `retryable` distinguishes transport-level
// failures (connection refused, timeout) from protocol-level ones (bad
// status, malformed body); only the former are retried.
class BackendError : public std::runtime_error {
public:
    BackendError(std::string endpoint, std::string cause, bool retryable = false)
        : std::runtime_error(endpoint + ": " + cause),
          endpoint_(std::move(endpoint)),
          cause_(std::move(cause)),
          retryable_(retryable) {}

    const std::string& endpoint() const { return endpoint_; }
    const std::string& cause() const { return cause_; }
    bool retryable() const { return retryable_; }

    // Rebuilds the error with a pipeline stage prefixed to the cause.
    BackendError with_stage(const std::string& stage) const {
        return BackendError(endpoint_, stage + ": " + cause_, retryable_);
    }

private:
    std::string endpoint_;
    std::string cause_;
    bool retryable_;
};

// A completion batch came back short even after the retry.
class PartialCompletion : public std::runtime_error {
public:
    PartialCompletion(std::size_t received, std::size_t requested)
        : std::runtime_error("received " + std::to_string(received) + " of " +
                             std::to_string(requested) + " completions"),
          received_(received),
          requested_(requested) {}

    std::size_t received() const { return received_; }
    std::size_t requested() const { return requested_; }

private:
    std::size_t received_;
    std::size_t requested_;
};

// Malformed structured text input (CoNLL-U, lexicon, config...).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Problem loading or validating a run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace best
