#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "domconf/errors.hpp"

namespace domconf::sexpr {

/// A node of a parsed s-expression tree. Atoms keep their source spelling;
/// callers decide about case folding.
struct Node {
  enum class Kind { Atom, List };

  Kind kind = Kind::Atom;
  std::string text;
  std::vector<Node> items;
  int line = 1;
  int column = 1;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_list() const { return kind == Kind::List; }
};

/// Parses exactly one top-level expression. `;` starts a comment running to
/// the end of the line. Throws SyntaxError with 1-based line/column.
Node parse(std::string_view text);

}  // namespace domconf::sexpr
