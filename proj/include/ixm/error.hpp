#ifndef IXM_ERROR_HPP_
#define IXM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ixm {

  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // A parameter outside the range a construction is defined for.
  class InvalidParameter : public Error {
   public:
    using Error::Error;
  };

  class PreconditionError : public Error {
   public:
    using Error::Error;
  };

  // Raised when a computation would exceed a size or time guard.
  class ResourceError : public Error {
   public:
    using Error::Error;
  };

  class ParseError : public Error {
   public:
    using Error::Error;
  };

  class NotImplemented : public Error {
   public:
    using Error::Error;
  };

  // Violated internal invariant; always a bug.
  class InternalError : public Error {
   public:
    using Error::Error;
  };

}  // namespace ixm

#endif  // IXM_ERROR_HPP_
