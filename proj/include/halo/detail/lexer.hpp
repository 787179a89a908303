#pragma once
// Character cursor and token readers shared by the Turtle, N-Triples and
// SPARQL parsers.

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "halo/rdf.hpp"

namespace halo {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(std::move(message)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

namespace detail {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool eof() const noexcept { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const noexcept {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char get() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  bool starts_with(std::string_view s) const noexcept { return text_.substr(pos_).starts_with(s); }
  bool starts_with_nocase(std::string_view s) const noexcept {
    if (text_.size() - pos_ < s.size()) return false;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) !=
          std::toupper(static_cast<unsigned char>(s[i])))
        return false;
    return true;
  }
  bool consume(char c) {
    if (peek() != c || eof()) return false;
    get();
    return true;
  }
  void expect(char c, std::string_view what) {
    if (!consume(c)) fail("expected " + std::string(what));
  }

  // Skips whitespace and, optionally, '#' comments.
  void skip_space(bool comments = true) {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else if (comments && c == '#') {
        while (!eof() && peek() != '\n') get();
      } else {
        break;
      }
    }
  }
  // Horizontal whitespace only (N-Triples lines).
  void skip_blanks() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) get();
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_, col_, message); }

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return col_; }
  std::size_t pos() const noexcept { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

// '<' ... '>' with the brackets stripped. No escapes are supported.
inline std::string read_iriref(Cursor& in) {
  in.expect('<', "'<'");
  std::string out;
  while (true) {
    if (in.eof()) in.fail("unterminated IRI");
    char c = in.peek();
    if (c == '>') break;
    if (c == '\n' || c == ' ' || c == '<' || c == '"') in.fail("invalid character in IRI");
    out += in.get();
  }
  in.get();
  return out;
}

inline void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Double-quoted single-line string; returns the unescaped content.
inline std::string read_quoted(Cursor& in) {
  if (in.starts_with("\"\"\"")) in.fail("triple-quoted strings are not supported");
  in.expect('"', "'\"'");
  std::string out;
  while (true) {
    if (in.eof() || in.peek() == '\n') in.fail("unterminated string literal");
    char c = in.get();
    if (c == '"') break;
    if (c != '\\') {
      out += c;
      continue;
    }
    if (in.eof()) in.fail("unterminated escape");
    char e = in.get();
    switch (e) {
      case '"': out += '"'; break;
      case '\'': out += '\''; break;
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case 'u':
      case 'U': {
        int digits = e == 'u' ? 4 : 8;
        unsigned long cp = 0;
        for (int i = 0; i < digits; ++i) {
          char h = in.peek();
          if (!std::isxdigit(static_cast<unsigned char>(h))) in.fail("bad unicode escape");
          in.get();
          cp = cp * 16 + static_cast<unsigned long>(std::isdigit(static_cast<unsigned char>(h))
                                                         ? h - '0'
                                                         : std::tolower(h) - 'a' + 10);
        }
        append_utf8(out, cp);
        break;
      }
      default: in.fail(std::string("unsupported escape \\") + e);
    }
  }
  return out;
}

inline std::string escape_string(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

// After '@': [a-zA-Z]+ ('-' [a-zA-Z0-9]+)*
inline std::string read_langtag(Cursor& in) {
  std::string out;
  while (std::isalpha(static_cast<unsigned char>(in.peek()))) out += in.get();
  if (out.empty()) in.fail("empty language tag");
  while (in.peek() == '-' && std::isalnum(static_cast<unsigned char>(in.peek(1)))) {
    out += in.get();
    while (std::isalnum(static_cast<unsigned char>(in.peek()))) out += in.get();
  }
  return out;
}

// After "_:".
inline std::string read_blank_label(Cursor& in) {
  std::string out;
  if (!std::isalnum(static_cast<unsigned char>(in.peek())) && in.peek() != '_')
    in.fail("invalid blank node label");
  while (is_name_char(in.peek()) || (in.peek() == '.' && is_name_char(in.peek(1)))) out += in.get();
  return out;
}

struct PrefixedName {
  std::string prefix;
  std::string local;
};

// PN_PREFIX? ':' PN_LOCAL? (a trailing '.' is left for the statement
// terminator).
inline PrefixedName read_prefixed_name(Cursor& in) {
  PrefixedName pn;
  if (std::isalpha(static_cast<unsigned char>(in.peek()))) {
    while (is_name_char(in.peek()) || (in.peek() == '.' && is_name_char(in.peek(1)))) pn.prefix += in.get();
  }
  if (!in.consume(':')) in.fail("expected ':' in prefixed name");
  if (std::isalnum(static_cast<unsigned char>(in.peek())) || in.peek() == '_') {
    while (is_name_char(in.peek()) || (in.peek() == '.' && is_name_char(in.peek(1)))) pn.local += in.get();
  }
  return pn;
}

inline std::string read_word(Cursor& in) {
  std::string out;
  while (std::isalnum(static_cast<unsigned char>(in.peek())) || in.peek() == '_') out += in.get();
  return out;
}

}  // namespace detail
}  // namespace halo
