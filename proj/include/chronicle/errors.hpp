#pragma once

#include <stdexcept>
#include <string>

namespace chronicle {

// Malformed or inconsistent input data (bad JSONL record, dangling
// reference, missing label). CLI maps this to exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (non-finite matrix entry, factorization breakdown).
// CLI maps this to exit code 4.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace chronicle
