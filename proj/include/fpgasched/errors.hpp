#pragma once

#include <stdexcept>
#include <string>

namespace fpgasched {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SlotOverflow : public Error {
 public:
  SlotOverflow(std::string kind, int declared, int limit)
      : Error("slot overflow: " + kind + " args declared " + std::to_string(declared) +
              " exceeds limit " + std::to_string(limit)),
        kind_(std::move(kind)),
        declared_(declared),
        limit_(limit) {}

  const std::string& kind() const { return kind_; }
  int declared() const { return declared_; }
  int limit() const { return limit_; }

 private:
  std::string kind_;
  int declared_;
  int limit_;
};

class InvalidArgs : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class CorruptContext : public Error {
 public:
  using Error::Error;
};

class NotRunning : public Error {
 public:
  using Error::Error;
};

class InvalidTransition : public Error {
 public:
  using Error::Error;
};

class TimeTravel : public Error {
 public:
  using Error::Error;
};

class Exhausted : public Error {
 public:
  using Error::Error;
};

class NoArrival : public Error {
 public:
  using Error::Error;
};

class NeverLaunched : public Error {
 public:
  using Error::Error;
};

class EmptyRun : public Error {
 public:
  using Error::Error;
};

class MismatchedConfigs : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace fpgasched
