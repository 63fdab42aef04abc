#pragma once

#include <stdexcept>
#include <string>

namespace snn {

// Error categories map onto the CLI exit codes: usage -> 1, data -> 2,
// numerical -> 3. Anything else escaping to main is treated as a data error.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace snn
