#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace noisechaos {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Non-positive time step.
class InvalidStep : public Error {
public:
  using Error::Error;
};

class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Integrator or stepper failed to meet its accuracy contract.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Two adjacent levels coincide; carries the index n of the zero spacing
/// s_n = e_{n+1} - e_n.
class DegenerateSpectrum : public Error {
public:
  DegenerateSpectrum(std::size_t index)
      : Error("degenerate spectrum: zero level spacing at index " + std::to_string(index)),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

/// |M^{(n)}_{2n}| fell below the breakdown threshold at Lanczos level n.
class LanczosBreakdown : public Error {
public:
  LanczosBreakdown(int level)
      : Error("Lanczos breakdown at level " + std::to_string(level)), level_(level) {}
  int level() const noexcept { return level_; }

private:
  int level_;
};

/// Configuration problem; the message starts with the JSON field path.
class ConfigError : public Error {
public:
  ConfigError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

}  // namespace noisechaos
