#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clonelab
{

/// Base class of all library errors.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (wrong arity, unknown names, broken promise).
class InputError : public Error
{
public:
  using Error::Error;
};

/// Syntax error in a textual format; carries the character offset.
class ParseError : public InputError
{
public:
  ParseError( std::string const& msg, std::size_t position )
      : InputError( msg + " at position " + std::to_string( position ) ), position_( position )
  {
  }

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// Numeric parameter outside its admissible range.
class RangeError : public InputError
{
public:
  using InputError::InputError;
};

/// A random bit stream ran out before the construction finished.
class StreamExhausted : public InputError
{
public:
  using InputError::InputError;
};

/// An exhaustive operation would exceed a configured cap or budget.
class CapacityError : public Error
{
public:
  using Error::Error;
};

/// The request is well formed but its answer does not exist (e.g. synthesizing a non-member).
class LogicError : public Error
{
public:
  using Error::Error;
};

/// A conversion or fast path refuses because a hypothesis fails; the message names the diagnosis.
class RefusalError : public LogicError
{
public:
  using LogicError::LogicError;
};

/// Broken internal invariant.
class InternalError : public Error
{
public:
  using Error::Error;
};

} // namespace clonelab
