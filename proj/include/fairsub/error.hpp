#ifndef FAIRSUB_ERROR_HPP
#define FAIRSUB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fairsub {

enum class ErrorKind {
  Input,            // malformed or out-of-range input
  Precondition,     // operation called outside its domain
  Resource,         // enumeration budget exceeded
  NotEnvyFreeable,  // positive-weight cycle in an envy graph
  Unsupported,      // no EF1 method applies to the instance
  Internal,         // a checked invariant failed; indicates a solver bug
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

// Throws Internal when a proven inequality does not hold at runtime.
inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::Internal, what);
}

}  // namespace fairsub

#endif
