#pragma once

#include <stdexcept>
#include <string>

namespace calabi {

/// Domain-level failure. `name()` is a stable identifier suitable for
/// machine consumption (the CLI prints it verbatim and exits 2).
class DomainError : public std::runtime_error {
public:
  DomainError(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

  const std::string& name() const { return name_; }

private:
  std::string name_;
};

[[noreturn]] inline void fail(const std::string& name, const std::string& what) {
  throw DomainError(name, what);
}

} // namespace calabi
