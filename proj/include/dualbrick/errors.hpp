#pragma once

#include <stdexcept>
#include <string>

namespace dualbrick {

enum class ErrorKind { Validation, Guard, Numerical, Io };

// every library failure carries a category so the cli can map it to an exit code
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error validation_error(const std::string& m) { return Error(ErrorKind::Validation, m); }
inline Error guard_error(const std::string& m) { return Error(ErrorKind::Guard, m); }
inline Error numerical_error(const std::string& m) { return Error(ErrorKind::Numerical, m); }
inline Error io_error(const std::string& m) { return Error(ErrorKind::Io, m); }

}  // namespace dualbrick
