#pragma once

#include <stdexcept>
#include <string>

namespace npsl {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  singular,
  no_convergence,
  approximate_only,
  unsupported,
  hypothesis,
  parse,
};

/// Library-wide exception. `code()` distinguishes input errors from
/// numerical failures and from refusals on unmet mathematical hypotheses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace npsl
