#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace probefp {

// Error categories map 1:1 onto the CLI exit codes.
enum class ErrorCategory {
    usage = 2,
    ingest = 3,
    training = 4,
    evaluation = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string message)
        : std::runtime_error(std::move(message)), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
};

inline Error usage_error(std::string msg) {
    return Error(ErrorCategory::usage, std::move(msg));
}
// Unreadable or malformed input files, frames and records.
inline Error ingest_error(std::string msg) {
    return Error(ErrorCategory::ingest, std::move(msg));
}
// Pair construction and boosting failures, bad training parameters.
inline Error training_error(std::string msg) {
    return Error(ErrorCategory::training, std::move(msg));
}
// Matching, clustering and metric computation failures.
inline Error evaluation_error(std::string msg) {
    return Error(ErrorCategory::evaluation, std::move(msg));
}

}  // namespace probefp
