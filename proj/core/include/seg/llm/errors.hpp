#pragma once

#include <string>

#include "seg/error.hpp"

namespace seg::llm {

class LlmError : public Error {
 public:
  LlmError(const std::string& what, bool retryable) : Error(what), retryable_(retryable) {}
  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

/// Connection refused, reset, DNS failure and similar.
class TransportError : public LlmError {
 public:
  explicit TransportError(const std::string& what) : LlmError(what, true) {}
};

class TimeoutError : public LlmError {
 public:
  explicit TimeoutError(const std::string& what) : LlmError(what, true) {}
};

/// The backend answered with an error payload. 429 and 5xx are retryable.
class ProviderError : public LlmError {
 public:
  ProviderError(const std::string& what, int status, bool retryable)
      : LlmError(what, retryable), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

/// A scripted provider has no response recorded for the request.
class FixtureMissing : public LlmError {
 public:
  explicit FixtureMissing(const std::string& what) : LlmError(what, false) {}
};

}  // namespace seg::llm
