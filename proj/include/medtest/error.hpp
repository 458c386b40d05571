#ifndef MEDTEST_ERROR_HPP
#define MEDTEST_ERROR_HPP

#include <stdexcept>
#include <string>

namespace medtest {

// Error taxonomy shared by the whole library.
//   argument — caller passed an out-of-domain parameter or invalid handle
//   data     — a dataset violates its invariants (non-finite, bad coding, ...)
//   numeric  — a computation failed (singular design, non-SPD matrix,
//              separation, divergence, degenerate standard errors, ...)
enum class ErrorKind { argument, data, numeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_argument(const std::string& msg) {
  throw Error(ErrorKind::argument, msg);
}
[[noreturn]] inline void throw_data(const std::string& msg) {
  throw Error(ErrorKind::data, msg);
}
[[noreturn]] inline void throw_numeric(const std::string& msg) {
  throw Error(ErrorKind::numeric, msg);
}

}  // namespace medtest

#endif  // MEDTEST_ERROR_HPP
