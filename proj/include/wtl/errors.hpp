#pragma once

#include <stdexcept>
#include <string>

namespace wtl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

#define WTL_DEFINE_ERROR(Name) \
  class Name : public Error {  \
   public:                     \
    using Error::Error;        \
  };

WTL_DEFINE_ERROR(PositionOutOfRange)
WTL_DEFINE_ERROR(InvalidEncoding)
WTL_DEFINE_ERROR(UnboundVariable)
WTL_DEFINE_ERROR(ExplosionGuard)
WTL_DEFINE_ERROR(NotStepFormula)
WTL_DEFINE_ERROR(NotStepFamily)
WTL_DEFINE_ERROR(BadMacroParams)
WTL_DEFINE_ERROR(VariableOutOfRange)
WTL_DEFINE_ERROR(NotNormalized)
WTL_DEFINE_ERROR(InvalidInput)

#undef WTL_DEFINE_ERROR

}  // namespace wtl
