#pragma once

#include <stdexcept>
#include <string>

namespace factreward {

/// Base class for every error raised by the library. The CLI maps subclasses
/// onto process exit codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// annotation parsing
class MalformedAnnotation : public Error {
  public:
    using Error::Error;
};

class UnknownLabel : public Error {
  public:
    explicit UnknownLabel(std::string text)
        : Error("unknown verification label: '" + text + "'"), text_(std::move(text)) {}
    const std::string& text() const noexcept { return text_; }

  private:
    std::string text_;
};

class MalformedScore : public Error {
  public:
    using Error::Error;
};

class OutOfRangeScore : public Error {
  public:
    using Error::Error;
};

// alignment
class NoAlignment : public Error {
  public:
    using Error::Error;
};

// reward
class InvalidConfig : public Error {
  public:
    using Error::Error;
};

class UncoveredOffset : public Error {
  public:
    UncoveredOffset(std::size_t offset, const std::string& what)
        : Error(what), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

// judge / retrieval
class MissingSlot : public Error {
  public:
    using Error::Error;
};

class EmptyStore : public Error {
  public:
    using Error::Error;
};

class JudgeUnavailable : public Error {
  public:
    using Error::Error;
};

// evaluation
class EmptyBatch : public Error {
  public:
    using Error::Error;
};

/// Input files that cannot be read or decoded.
class DataError : public Error {
  public:
    using Error::Error;
};

}  // namespace factreward
