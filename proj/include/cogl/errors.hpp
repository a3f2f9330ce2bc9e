#pragma once

#include <stdexcept>
#include <string>

namespace cogl {

/// Shapes of two operands do not line up.
class dimension_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid user-supplied setting (rates, counts, masks).
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent dataset files; message carries file/line context.
class load_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// NaN/Inf encountered where a finite value is required.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cogl
