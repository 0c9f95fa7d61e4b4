#pragma once

#include <stdexcept>
#include <string>

namespace semprosody {

/// Process exit codes shared by every CLI verb.
enum class ExitCode : int { Ok = 0, Config = 1, Data = 2, Remote = 3 };

class Error : public std::runtime_error {
public:
  Error(ExitCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

private:
  ExitCode code_;
};

/// Bad flags, unreadable config files, invalid option values.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string &what)
      : Error(ExitCode::Config, what) {}
};

/// Malformed or inconsistent input data.
class DataError : public Error {
public:
  explicit DataError(const std::string &what) : Error(ExitCode::Data, what) {}
};

/// HTTP failures against a translation endpoint.
class RemoteError : public Error {
public:
  explicit RemoteError(const std::string &what)
      : Error(ExitCode::Remote, what) {}
};

/// A caller broke an operation's documented precondition.
class PreconditionError : public DataError {
public:
  explicit PreconditionError(const std::string &what) : DataError(what) {}
};

inline std::string at_line(std::size_t line, const std::string &msg) {
  return "line " + std::to_string(line) + ": " + msg;
}

} // namespace semprosody
