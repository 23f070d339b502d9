// Exception types raised across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace feec
{

/// Base class of every error thrown by this library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error
{
public:
  using Error::Error;
};

class DegreeMismatch : public Error
{
public:
  using Error::Error;
};

/// Invalid user or caller configuration (unsupported degree, unstable pair, bad id, ...).
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// Linear solver breakdown; carries the best relative residual reached.
class SolverError : public Error
{
public:
  SolverError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual)
  {
  }
  double best_residual() const { return best_residual_; }

private:
  double best_residual_;
};

/// A per-cell block that could not be factored.
class SingularLocalBlock : public SolverError
{
public:
  SingularLocalBlock(const std::string& what, int cell, double rcond)
      : SolverError(what, 0.0), cell_(cell), rcond_(rcond)
  {
  }
  int cell() const { return cell_; }
  double rcond() const { return rcond_; }

private:
  int cell_;
  double rcond_;
};

}  // namespace feec
