#pragma once

#include <stdexcept>
#include <string>

namespace dyndist {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of definition (interval mismatch, point
// outside an interval, integration bounds escaping the domain).
struct DomainError : Error {
  using Error::Error;
};

// One-sided limit requested on the wrong side of a domain endpoint.
struct SideError : Error {
  using Error::Error;
};

// Affine substitution with zero scale.
struct DegenerateMapError : Error {
  using Error::Error;
};

// Piece degree would exceed the hard cap after a product.
struct DegreeCapError : Error {
  using Error::Error;
};

// Shape density does not integrate to one.
struct NormalizationError : Error {
  using Error::Error;
};

// Differentiation requested for a function whose transition profiles are
// not absolutely continuous (two-valued step embeddings).
struct NotDifferentiableError : Error {
  using Error::Error;
};

// Non-finite state encountered during integration.
struct DivergenceError : Error {
  using Error::Error;
};

// Step budget cannot resolve a mollifier window.
struct ResolutionError : Error {
  using Error::Error;
};

// Text input rejected; `position` is a byte offset into the input.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position = 0;
};

// A named object referenced by a problem file does not exist.
struct UnresolvedNameError : Error {
  using Error::Error;
};

// Semantic validation failure in a problem file or constructed object.
struct ValidationError : Error {
  using Error::Error;
};

}  // namespace dyndist
