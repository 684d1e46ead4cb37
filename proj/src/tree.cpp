#include "lq/tree.hpp"

#include <cctype>

#include "lq/errors.hpp"

namespace lq {

namespace {

void serialize_rec(const Tree& t, std::string& out) {
  out += t.label;
  if (t.children.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) out += ',';
    serialize_rec(t.children[i], out);
  }
  out += ')';
}

Tree parse_rec(std::string_view text, std::size_t& pos) {
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip();
  const std::size_t start = pos;
  while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
  if (pos == start) throw ParseError("expected tree label", pos);
  Tree t{std::string(text.substr(start, pos - start)), {}};
  skip();
  if (pos < text.size() && text[pos] == '(') {
    ++pos;
    for (;;) {
      t.children.push_back(parse_rec(text, pos));
      skip();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
        break;
      }
      throw ParseError("expected ',' or ')'", pos);
    }
  }
  return t;
}

}  // namespace

std::string serialize(const Tree& t) {
  std::string out;
  serialize_rec(t, out);
  return out;
}

Tree parse_tree(std::string_view text) {
  std::size_t pos = 0;
  Tree t = parse_rec(text, pos);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw ParseError("unexpected trailing input", pos);
  return t;
}

std::size_t node_count(const Tree& t) {
  std::size_t n = 1;
  for (const auto& c : t.children) n += node_count(c);
  return n;
}

}  // namespace lq
