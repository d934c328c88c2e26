#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxsum {

// Error taxonomy shared by every public operation. The CLI maps these to exit
// code 1; the python bindings translate them to ValueError.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct NonFiniteError : Error { using Error::Error; };
struct DegenerateError : Error { using Error::Error; };
struct BadPrecision : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct SingularError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

struct ZeroVarianceColumn : Error {
    explicit ZeroVarianceColumn(std::size_t column_index)
        : Error("column " + std::to_string(column_index) + " has zero variance"),
          column(column_index) {}
    std::size_t column;
};

}  // namespace maxsum
