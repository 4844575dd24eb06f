#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tbgeom {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at " + std::to_string(position) + ": " + message), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbol : public Error {
 public:
  UnknownSymbol(std::size_t position, const std::string& symbol)
      : Error("unknown symbol '" + symbol + "' at " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

#define TBGEOM_DEFINE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  };

TBGEOM_DEFINE_ERROR(DomainError)
TBGEOM_DEFINE_ERROR(UnknownManifold)
TBGEOM_DEFINE_ERROR(BadParams)
TBGEOM_DEFINE_ERROR(OutsideChart)
TBGEOM_DEFINE_ERROR(DegenerateInput)
TBGEOM_DEFINE_ERROR(SingularMetric)
TBGEOM_DEFINE_ERROR(DegeneratePlane)
TBGEOM_DEFINE_ERROR(NonPositiveScaling)
TBGEOM_DEFINE_ERROR(ZeroFiber)
TBGEOM_DEFINE_ERROR(NonFiniteState)
TBGEOM_DEFINE_ERROR(ParallelVectors)
TBGEOM_DEFINE_ERROR(PreconditionError)
TBGEOM_DEFINE_ERROR(ConfigError)

#undef TBGEOM_DEFINE_ERROR

/// Raised when an integrated trajectory leaves the chart box.
class ChartExit : public Error {
 public:
  explicit ChartExit(double t) : Error("trajectory left the chart at t=" + std::to_string(t)), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace tbgeom
