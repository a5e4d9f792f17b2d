#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace disckit {

/// Broad classes used to map failures onto CLI exit codes:
/// Config -> 1, Domain -> 2, Convergence -> 3.
enum class ErrorClass { Config, Domain, Convergence };

/// All library failures are reported through this type. `code()` is a short
/// stable identifier ("not-holomorphic", "contraction-failure", ...) that
/// tests and the CLI match on; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string code, const std::string& message)
      : std::runtime_error(message), cls_(cls), code_(std::move(code)) {}

  ErrorClass error_class() const { return cls_; }
  const std::string& code() const { return code_; }

 private:
  ErrorClass cls_;
  std::string code_;
};

[[noreturn]] inline void throw_config(const std::string& code, const std::string& msg) {
  throw Error(ErrorClass::Config, code, msg);
}
[[noreturn]] inline void throw_domain(const std::string& code, const std::string& msg) {
  throw Error(ErrorClass::Domain, code, msg);
}
[[noreturn]] inline void throw_convergence(const std::string& code, const std::string& msg) {
  throw Error(ErrorClass::Convergence, code, msg);
}

}  // namespace disckit
