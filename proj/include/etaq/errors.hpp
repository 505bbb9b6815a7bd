#ifndef ETAQ_ERRORS_HPP
#define ETAQ_ERRORS_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace etaq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// The ordering could not produce as many elements of Q as requested.
class EnumerationShortfall : public Error {
public:
  EnumerationShortfall(std::size_t requested, std::size_t available)
      : Error("ordering produced " + std::to_string(available) + " elements of Q, " +
              std::to_string(requested) + " requested (raise the enumeration bound)"),
        requested_(requested), available_(available) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t available() const noexcept { return available_; }

private:
  std::size_t requested_;
  std::size_t available_;
};

/// zeta evaluated at its pole s = 1.
class PoleError : public Error {
public:
  PoleError() : Error("pole at z=1") {}
};

/// 1 - 2^(1-s) vanishes (x = 1, y a nonzero multiple of 2*pi/ln 2).
class SingularDenominatorError : public Error {
public:
  SingularDenominatorError()
      : Error("singular denominator: 1 - 2^(1-s) = 0 at x=1, y a multiple of 2*pi/ln 2") {}
};

/// A numerical method ran out of budget. Carries the best estimate so far.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::complex<double> best, double bestError)
      : Error(what), best_(best), bestError_(bestError) {}

  std::complex<double> best() const noexcept { return best_; }
  double bestError() const noexcept { return bestError_; }

private:
  std::complex<double> best_;
  double bestError_;
};

/// Malformed input text, with the 1-based line where it happened.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace etaq

#endif  // ETAQ_ERRORS_HPP
