#pragma once

#include <stdexcept>
#include <string>

namespace saliqa {

// Error taxonomy shared by all modules. The CLI maps every subclass below
// to exit code 1 (bad input); anything else escaping to main is exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable or unwritable files.
class IoError : public Error {
    using Error::Error;
};

// Decodable but unsupported file layouts, bad magic numbers.
class FormatError : public Error {
    using Error::Error;
};

// Bad arguments: dimension mismatches, even kernels, empty lists.
class ParameterError : public Error {
    using Error::Error;
};

// Inputs that make the requested operation meaningless: constant maps under
// minmax/zscore, zero-sum maps under probability, all-zero tensors.
class DegenerateError : public Error {
    using Error::Error;
};

// Non-finite values where finite data is required.
class DataError : public Error {
    using Error::Error;
};

// CSV header/column problems.
class SchemaError : public Error {
    using Error::Error;
};

// Manifest-level validation failures (missing files, inconsistent groups).
class ValidationError : public Error {
    using Error::Error;
};

// Disconnected pairwise-comparison graphs.
class GraphError : public Error {
    using Error::Error;
};

}  // namespace saliqa
