#pragma once

#include <stdexcept>
#include <string>

namespace cvkit {

// Common base so the CLI boundary can catch every toolkit error in one place.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cvkit
