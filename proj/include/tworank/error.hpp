#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tworank {

// Base of every error the library raises on purpose.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition or schema. `fields` names every
// offending field when the error comes from a loader.
class ValidationError : public Error
{
public:
  explicit ValidationError(std::string const &what,
                           std::vector<std::string> fields = {})
  : Error(what), fields_(std::move(fields))
  {}

  std::vector<std::string> const &fields() const noexcept { return fields_; }

private:
  std::vector<std::string> fields_;
};

// A size guard on an exhaustive computation was exceeded.
class GuardExceeded : public Error
{
public:
  GuardExceeded(std::string guard, std::string const &what)
  : Error(what), guard_(std::move(guard))
  {}

  std::string const &guard() const noexcept { return guard_; }

private:
  std::string guard_;
};

// Regularity was requested for a system whose generator count differs from
// the number of variables.
class NonSquareSystem : public ValidationError
{
public:
  using ValidationError::ValidationError;
};

class InconsistentCharacter : public ValidationError
{
public:
  using ValidationError::ValidationError;
};

// Internal consistency check failed; indicates a bug, not bad input.
class InternalError : public Error
{
public:
  using Error::Error;
};

inline void require(bool cond, std::string const &what)
{
  if (!cond)
    throw ValidationError(what);
}

inline void guard(bool within, std::string const &name, std::string const &what)
{
  if (!within)
    throw GuardExceeded(name, what);
}

} // namespace tworank
