#pragma once

#include <stdexcept>
#include <string>

namespace xlg {

// Malformed or inconsistent input (files, tables, arguments).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation that is mathematically undefined for the given data:
// zero norms, rank deficiency, degenerate variance, non-convergence.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void fail_input(const std::string& what) { throw InputError(what); }
[[noreturn]] inline void fail_numeric(const std::string& what) { throw NumericError(what); }

}  // namespace detail
}  // namespace xlg
