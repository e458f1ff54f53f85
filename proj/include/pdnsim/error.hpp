#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pdnsim {

// All recoverable failures carry a stable machine-readable code plus a
// human-readable detail; what() is "<code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace pdnsim
