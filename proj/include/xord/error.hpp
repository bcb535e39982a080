#pragma once

#include <stdexcept>
#include <string>

namespace xord {

enum class ErrorKind {
    InvalidArgument,  // bad parameter, out-of-range vertex, mismatched sizes
    InvalidGame,      // structurally valid input that is not a usable game
    ParseError,       // malformed game file
    Unsupported,      // operation undefined for this input class
    ResourceLimit,    // enumeration or solve would exceed the configured budget
    SolverFailure,    // SDP did not converge to the requested tolerance
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

inline Error invalid_argument(std::string msg) { return Error(ErrorKind::InvalidArgument, std::move(msg)); }
inline Error invalid_game(std::string msg) { return Error(ErrorKind::InvalidGame, std::move(msg)); }
inline Error parse_error(std::string msg) { return Error(ErrorKind::ParseError, std::move(msg)); }
inline Error unsupported(std::string msg) { return Error(ErrorKind::Unsupported, std::move(msg)); }
inline Error resource_limit(std::string msg) { return Error(ErrorKind::ResourceLimit, std::move(msg)); }
inline Error solver_failure(std::string msg) { return Error(ErrorKind::SolverFailure, std::move(msg)); }

}  // namespace xord
