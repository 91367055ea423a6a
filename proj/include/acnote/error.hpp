#pragma once

#include <stdexcept>
#include <string>

namespace acnote {

/// Input violates a domain rule (bad parameter, invalid contract, missing
/// observation date). Maps to exit code 1 in the command-line front end.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File could not be opened, read or written. Maps to exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace acnote
