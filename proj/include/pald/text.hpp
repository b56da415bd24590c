#pragma once

// Concrete syntax. See docs/grammar.md for the full grammar.
//
// Boolean layer (also the only thing accepted inside ==, !=, kd and :=):
//   P ::= atom | ~P | (P & P)
// Parentheses around every boolean conjunction are mandatory there, which
// makes the printed text isomorphic to the tree.
//
// Full language adds ==, !=, box i, [phi]psi, kd i, p := P and the sugar
// |, ->, <->, kx i. At this layer binary operators may be written without
// parentheses and follow the usual precedence (& > | > -> > <->).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pald/syntax.hpp"

namespace pald {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

BoolForm parse_bool(std::string_view text);
Form parse_form(std::string_view text);

/// Canonical text; parse_bool(to_string(f)) == f.
std::string to_string(const BoolForm& f);
/// Canonical text using |, ->, <->, != and kx where the tree has their shape;
/// parse_form(to_string(f)) == f.
std::string to_string(const Form& f);

}  // namespace pald
