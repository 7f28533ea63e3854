#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace subshift {

enum class ErrorKind {
  invalid_spec,
  out_of_certified_range,
  not_in_language,
  range,
  undefined_on_periodic,
  horizon,
  cap_exceeded,
  not_found,
  precondition,
  contract_violation,
  infeasible,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_spec: return "invalid_spec";
    case ErrorKind::out_of_certified_range: return "out_of_certified_range";
    case ErrorKind::not_in_language: return "not_in_language";
    case ErrorKind::range: return "range";
    case ErrorKind::undefined_on_periodic: return "undefined_on_periodic";
    case ErrorKind::horizon: return "horizon";
    case ErrorKind::cap_exceeded: return "cap_exceeded";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::contract_violation: return "contract_violation";
    case ErrorKind::infeasible: return "infeasible";
  }
  return "unknown";
}

// Base of every error thrown by the library. `kind` drives the CLI exit code.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
  : std::runtime_error(what), kind_(kind)
  {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

// A query beyond the depth to which factor sets are certified.
class OutOfCertifiedRange : public Error {
public:
  OutOfCertifiedRange(std::size_t requested, std::size_t achieved)
  : Error(ErrorKind::out_of_certified_range,
          "length " + std::to_string(requested) +
          " is beyond the certified depth " + std::to_string(achieved)),
    requested_(requested), achieved_(achieved)
  {}

  std::size_t requested() const { return requested_; }
  std::size_t achieved() const { return achieved_; }

private:
  std::size_t requested_;
  std::size_t achieved_;
};

// Enumeration or closure exceeded its configured cap.
class CapExceeded : public Error {
public:
  CapExceeded(const std::string& what, double estimate)
  : Error(ErrorKind::cap_exceeded, what), estimate_(estimate)
  {}

  // Estimated work (candidate count, closure size, ...) that triggered the cap.
  double estimate() const { return estimate_; }

private:
  double estimate_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond)
    fail(kind, what);
}

} // namespace subshift
