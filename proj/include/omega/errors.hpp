#pragma once

#include <stdexcept>
#include <string>

namespace omega {

// thrown when an iterative scheme fails to converge or a bracket is lost
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// thrown when inputs violate the model assumptions
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace omega
