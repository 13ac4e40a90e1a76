#pragma once

#include <stdexcept>
#include <string>

namespace torq {

class invalid_argument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class precondition_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// no room left for a fresh parameter / search budget exhausted
class capacity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class verification_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace torq
