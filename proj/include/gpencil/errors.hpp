#pragma once

#include <stdexcept>
#include <string>

namespace gpencil {

enum class ErrorKind {
  syntax,
  unknown_identifier,
  domain,
  non_differentiable,
  vanishing_curvature,
  not_unit_speed,
  initial_vector_not_normal,
  out_of_domain,
  precondition,
  degenerate_normal,
  indeterminate,
  curve_not_on_surface,
  invalid_argument,
  io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::syntax: return "syntax error";
    case ErrorKind::unknown_identifier: return "unknown identifier";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::non_differentiable: return "non-differentiable";
    case ErrorKind::vanishing_curvature: return "vanishing curvature";
    case ErrorKind::not_unit_speed: return "not unit speed";
    case ErrorKind::initial_vector_not_normal: return "initial vector not normal";
    case ErrorKind::out_of_domain: return "out of domain";
    case ErrorKind::precondition: return "precondition violated";
    case ErrorKind::degenerate_normal: return "degenerate normal";
    case ErrorKind::indeterminate: return "indeterminate";
    case ErrorKind::curve_not_on_surface: return "curve not on surface";
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::io: return "i/o error";
  }
  return "error";
}

// Single exception type; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry the byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorKind kind, std::size_t offset, const std::string& what)
      : Error(kind, what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Error raised while processing a sampled grid; index is the offending node.
class IndexedError : public Error {
 public:
  IndexedError(const Error& inner, std::size_t index, double s)
      : Error(inner.kind(), std::string(strip(inner.what())) + " (node " + std::to_string(index) +
                                ", s=" + std::to_string(s) + ")"),
        index_(index),
        s_(s) {}

  std::size_t index() const noexcept { return index_; }
  double s() const noexcept { return s_; }

 private:
  static std::string strip(const std::string& msg) {
    auto pos = msg.find(": ");
    return pos == std::string::npos ? msg : msg.substr(pos + 2);
  }

  std::size_t index_;
  double s_;
};

}  // namespace gpencil
