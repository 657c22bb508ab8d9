// Exception types shared by every stage of the pipeline.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tml {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class VariableLimitExceeded : public Error {
 public:
  using Error::Error;
};

class CaptureError : public Error {
 public:
  using Error::Error;
};

class UnknownWorld : public Error {
 public:
  using Error::Error;
};

class AgentClash : public Error {
 public:
  using Error::Error;
};

class AgentNotLive : public Error {
 public:
  using Error::Error;
};

class IrrelevantAssignment : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public Error {
 public:
  using Error::Error;
};

class NotASentence : public Error {
 public:
  using Error::Error;
};

class NameClash : public Error {
 public:
  using Error::Error;
};

class NotFsnf : public Error {
 public:
  using Error::Error;
};

class HeightExceeded : public Error {
 public:
  using Error::Error;
};

class NotSatisfiedAtRoot : public Error {
 public:
  using Error::Error;
};

class EmptyDomain : public Error {
 public:
  using Error::Error;
};

class ModelFormatError : public Error {
 public:
  using Error::Error;
};

/// Raised when a search or rewrite exceeds its configured node budget.
class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(std::string stage)
      : Error("resource limit exceeded in " + stage), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace tml
