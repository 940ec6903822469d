#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dhub {

enum class ErrorCode {
  Input,         // malformed argument or request
  NotFound,      // referenced id does not exist
  Integrity,     // would create or leave a dangling reference
  Validation,    // entity invariant violated
  State,         // illegal lifecycle transition
  Format,        // unreadable or malformed file / body
  Config,        // generator or service configuration rejected
  Completeness,  // required intake answers missing
  Parse,         // intake answer does not parse as its kind
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `details` carries structured extras
/// (missing question ids, referrer ids, violation list) for API error bodies.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::vector<std::string> details = {})
      : std::runtime_error(std::move(message)), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

}  // namespace dhub
