#pragma once

#include <stdexcept>
#include <string>

namespace dweb {

// Error taxonomy mapped to CLI exit codes: validation -> 1, I/O -> 2, guard -> 3.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class GuardRefusal : public std::runtime_error {
public:
    explicit GuardRefusal(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dweb
