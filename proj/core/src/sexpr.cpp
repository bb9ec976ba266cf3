#include "domconf/sexpr.hpp"

#include <cctype>

namespace domconf {
namespace pddl {

namespace {
std::string located(const std::string& message, int line, int column) {
  if (line <= 0) return message;
  return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}
}  // namespace

PddlError::PddlError(const std::string& message, int line, int column)
    : InputError(located(message, line, column)), bare_(message), line_(line), column_(column) {}

UnsupportedRequirementError::UnsupportedRequirementError(const std::string& requirement, int line,
                                                         int column)
    : PddlError("unsupported requirement " + requirement, line, column), requirement_(requirement) {}

}  // namespace pddl

namespace sexpr {
namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Node read_document() {
    skip_blank();
    if (at_end()) throw pddl::SyntaxError("unexpected end of input", line_, column_);
    Node root = read_node();
    skip_blank();
    if (!at_end()) throw pddl::SyntaxError("trailing content after expression", line_, column_);
    return root;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (!at_end()) {
      const char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  Node read_node() {
    Node node;
    node.line = line_;
    node.column = column_;
    const char c = peek();
    if (c == ')') throw pddl::SyntaxError("unexpected ')'", line_, column_);
    if (c == '(') {
      node.kind = Node::Kind::List;
      advance();
      for (;;) {
        skip_blank();
        if (at_end()) {
          throw pddl::SyntaxError("unterminated list opened at " + std::to_string(node.line) + ":" +
                                      std::to_string(node.column),
                                  line_, column_);
        }
        if (peek() == ')') {
          advance();
          return node;
        }
        node.items.push_back(read_node());
      }
    }
    node.kind = Node::Kind::Atom;
    while (!at_end()) {
      const char d = peek();
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      node.text.push_back(d);
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

Node parse(std::string_view text) { return Reader(text).read_document(); }

}  // namespace sexpr
}  // namespace domconf
