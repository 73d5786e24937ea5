#pragma once

#include <stdexcept>
#include <string>

namespace vitality {

// Input documents or datasets that cannot be used as given (malformed syntax,
// schema violations, broken references). Precondition violations on the
// numeric routines are reported as std::invalid_argument instead.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vitality
