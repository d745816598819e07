#pragma once

#include <stdexcept>
#include <string>

namespace divcorr {

// Error taxonomy shared by every module. The CLI maps each kind to an exit code.
enum class ErrorKind {
  domain,        // argument outside the region where the quantity is defined
  precondition,  // caller violated a documented precondition
  pole,          // argument sits on a pole (Gamma at 0, -1, ...)
  budget,        // work or memory estimate above the configured cap
  overflow,      // exact arithmetic exceeded its digit cap
  rank,          // least-squares design matrix numerically rank deficient
  invariant,     // internal consistency check failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

const char* to_string(ErrorKind kind) noexcept;

}  // namespace divcorr
