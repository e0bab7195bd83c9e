#include "langest/toml_lite.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "langest/errors.hpp"

namespace langest {

namespace {

using nlohmann::json;

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        table = parse_header(root);
      } else {
        parse_key_value(*table);
      }
      expect_line_end();
    }
    return root;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "TOML line " << line_ << ": " << what;
    throw DomainError(os.str());
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char get() {
    if (eof()) fail("unexpected end of input");
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++pos_;
  }
  void skip_blank_lines() {
    while (!eof()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\n' || peek() == '\r')
        get();
      else
        break;
    }
  }
  // Whitespace, comments and newlines inside arrays.
  void skip_any() {
    while (!eof()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\n' || peek() == '\r')
        get();
      else
        break;
    }
  }
  void expect_line_end() {
    skip_spaces();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r') get();
    if (peek() != '\n') fail("expected end of line");
    get();
  }

  std::vector<std::string> parse_key() {
    std::vector<std::string> parts;
    while (true) {
      skip_spaces();
      std::string part;
      if (peek() == '"') {
        part = parse_basic_string();
      } else if (peek() == '\'') {
        part = parse_literal_string();
      } else {
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                          peek() == '-'))
          part += get();
        if (part.empty()) fail("expected a key");
      }
      parts.push_back(part);
      skip_spaces();
      if (peek() != '.') break;
      get();
    }
    return parts;
  }

  json* descend(json& root, const std::vector<std::string>& path, std::size_t count) {
    json* node = &root;
    for (std::size_t i = 0; i < count; ++i) {
      json& next = (*node)[path[i]];
      if (next.is_null()) next = json::object();
      if (next.is_array()) {
        if (next.empty() || !next.back().is_object()) fail("key '" + path[i] + "' is not a table");
        node = &next.back();
      } else if (next.is_object()) {
        node = &next;
      } else {
        fail("key '" + path[i] + "' is not a table");
      }
    }
    return node;
  }

  json* parse_header(json& root) {
    get();  // [
    const bool array = peek() == '[';
    if (array) get();
    const auto path = parse_key();
    if (get() != ']') fail("expected ']'");
    if (array && get() != ']') fail("expected ']]'");
    json* parent = descend(root, path, path.size() - 1);
    json& slot = (*parent)[path.back()];
    if (array) {
      if (slot.is_null()) slot = json::array();
      if (!slot.is_array()) fail("'" + path.back() + "' is not an array of tables");
      slot.push_back(json::object());
      return &slot.back();
    }
    if (slot.is_null()) slot = json::object();
    if (!slot.is_object()) fail("'" + path.back() + "' is already a value");
    return &slot;
  }

  void parse_key_value(json& table) {
    const auto path = parse_key();
    skip_spaces();
    if (get() != '=') fail("expected '='");
    skip_spaces();
    json* parent = descend(table, path, path.size() - 1);
    if (parent->contains(path.back())) fail("duplicate key '" + path.back() + "'");
    (*parent)[path.back()] = parse_value();
  }

  json parse_value() {
    const char c = peek();
    if (c == '"') return parse_basic_string();
    if (c == '\'') return parse_literal_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    return parse_number();
  }

  std::string parse_basic_string() {
    get();  // "
    std::string out;
    while (true) {
      const char c = get();
      if (c == '"') break;
      if (c == '\n') fail("newline in string");
      if (c != '\\') {
        out += c;
        continue;
      }
      const char e = get();
      switch (e) {
        case 'n':
          out += '\n';
          break;
        case 't':
          out += '\t';
          break;
        case 'r':
          out += '\r';
          break;
        case '"':
          out += '"';
          break;
        case '\\':
          out += '\\';
          break;
        default:
          fail(std::string("unsupported escape \\") + e);
      }
    }
    return out;
  }

  std::string parse_literal_string() {
    get();  // '
    std::string out;
    while (true) {
      const char c = get();
      if (c == '\'') break;
      if (c == '\n') fail("newline in string");
      out += c;
    }
    return out;
  }

  json parse_array() {
    get();  // [
    json arr = json::array();
    while (true) {
      skip_any();
      if (peek() == ']') {
        get();
        return arr;
      }
      arr.push_back(parse_value());
      skip_any();
      if (peek() == ',') {
        get();
        continue;
      }
      if (peek() == ']') {
        get();
        return arr;
      }
      fail("expected ',' or ']' in array");
    }
  }

  json parse_inline_table() {
    get();  // {
    json table = json::object();
    skip_spaces();
    if (peek() == '}') {
      get();
      return table;
    }
    while (true) {
      parse_key_value(table);
      skip_spaces();
      const char c = get();
      if (c == '}') return table;
      if (c != ',') fail("expected ',' or '}' in inline table");
    }
  }

  json parse_number() {
    std::string tok;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                      peek() == '-' || peek() == '.' || peek() == '_'))
      tok += get();
    if (tok.empty()) fail("expected a value");
    std::string clean;
    for (char c : tok)
      if (c != '_') clean += c;
    const std::string body = (clean[0] == '+' || clean[0] == '-') ? clean.substr(1) : clean;
    const bool negative = clean[0] == '-';
    if (body == "inf") return negative ? -std::numeric_limits<double>::infinity()
                                       : std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    const bool is_float = clean.find_first_of(".eE") != std::string::npos;
    try {
      std::size_t used = 0;
      if (is_float) {
        const double v = std::stod(clean, &used);
        if (used != clean.size()) fail("malformed number '" + tok + "'");
        return v;
      }
      if (!negative) {
        const unsigned long long v = std::stoull(clean, &used, 10);
        if (used != clean.size()) fail("malformed number '" + tok + "'");
        return static_cast<std::uint64_t>(v);
      }
      const long long v = std::stoll(clean, &used, 10);
      if (used != clean.size()) fail("malformed number '" + tok + "'");
      return static_cast<std::int64_t>(v);
    } catch (const std::logic_error&) {
      fail("malformed value '" + tok + "'");
    }
  }
};

}  // namespace

nlohmann::json parse_toml(const std::string& text) { return Parser(text).parse(); }

}  // namespace langest
