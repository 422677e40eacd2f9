#pragma once

#include <stdexcept>
#include <string>

namespace chargeaudit {

enum class ErrorKind {
  Parse,
  Config,
  Schema,
  Io,
  EmptyInput,
  DegenerateInput,
  LengthMismatch,
  NotDisposed,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

template <ErrorKind K>
class KindError : public Error {
 public:
  explicit KindError(const std::string& what) : Error(K, what) {}
};

using ParseError = KindError<ErrorKind::Parse>;
using ConfigError = KindError<ErrorKind::Config>;
using SchemaError = KindError<ErrorKind::Schema>;
using IoError = KindError<ErrorKind::Io>;
using EmptyInputError = KindError<ErrorKind::EmptyInput>;
using DegenerateInputError = KindError<ErrorKind::DegenerateInput>;
using LengthMismatchError = KindError<ErrorKind::LengthMismatch>;
using NotDisposedError = KindError<ErrorKind::NotDisposed>;

}  // namespace chargeaudit
