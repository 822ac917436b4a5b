#pragma once

#include <stdexcept>
#include <string>

namespace galileo {

/// Error type thrown by all library entry points.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace galileo
