#pragma once

#include <stdexcept>
#include <string>

namespace at {

enum class ErrorCode {
    invalid = 1,
    config = 2,
    capacity = 3,
    numeric = 4,
    domain = 5,
    singular = 6,
    io = 7,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void throw_config(const std::string& msg) { throw Error(ErrorCode::config, msg); }
[[noreturn]] inline void throw_domain(const std::string& msg) { throw Error(ErrorCode::domain, msg); }
[[noreturn]] inline void throw_singular(const std::string& msg) { throw Error(ErrorCode::singular, msg); }
[[noreturn]] inline void throw_capacity(const std::string& msg) { throw Error(ErrorCode::capacity, msg); }
[[noreturn]] inline void throw_numeric(const std::string& msg) { throw Error(ErrorCode::numeric, msg); }

} // namespace at
