/*
 * Copyright 2026 The Sensbench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sensbench/toml.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "sensbench/error.h"

namespace sensbench {
namespace {

using nlohmann::json;

class TomlParser {
 public:
  explicit TomlParser(std::string_view text) : text_(text) {}

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
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("config line " + std::to_string(line_) + ": " + msg);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }
  char next() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++pos_;
    }
  }

  // Whitespace, comments and newlines (inside arrays, between statements).
  void skip_blank_lines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        next();
      } else {
        break;
      }
    }
  }

  void expect_line_end() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() == '\r') ++pos_;
    if (peek() != '\n') fail("unexpected trailing characters");
    next();
  }

  std::vector<std::string> parse_key() {
    std::vector<std::string> parts;
    while (true) {
      skip_ws();
      if (peek() == '"') {
        parts.push_back(parse_basic_string());
      } else if (peek() == '\'') {
        parts.push_back(parse_literal_string());
      } else {
        std::string bare;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                          peek() == '_' || peek() == '-')) {
          bare.push_back(next());
        }
        if (bare.empty()) fail("expected a key");
        parts.push_back(std::move(bare));
      }
      skip_ws();
      if (peek() != '.') break;
      next();
    }
    return parts;
  }

  json* descend(json& root, const std::vector<std::string>& path,
                std::size_t count) {
    json* node = &root;
    for (std::size_t i = 0; i < count; ++i) {
      json& child = (*node)[path[i]];
      if (child.is_null()) child = json::object();
      if (child.is_array()) {
        if (child.empty() || !child.back().is_object()) fail("key '" + path[i] + "' is not a table");
        node = &child.back();
      } else if (child.is_object()) {
        node = &child;
      } else {
        fail("key '" + path[i] + "' is not a table");
      }
    }
    return node;
  }

  json* parse_header(json& root) {
    next();
    const bool array = peek() == '[';
    if (array) next();
    const auto path = parse_key();
    if (next() != ']') fail("expected ']'");
    if (array && (eof() || next() != ']')) fail("expected ']]'");
    json* parent = descend(root, path, path.size() - 1);
    json& slot = (*parent)[path.back()];
    std::string joined;
    for (const auto& part : path) joined += part + '\x1f';
    if (array) {
      if (slot.is_null()) slot = json::array();
      if (!slot.is_array()) fail("'" + path.back() + "' is not an array of tables");
      slot.push_back(json::object());
      // Sub-tables of the previous element may be declared again.
      std::erase_if(defined_, [&](const std::string& d) { return d.starts_with(joined); });
      return &slot.back();
    }
    if (!defined_.insert(joined).second) fail("table '" + path.back() + "' defined twice");
    if (slot.is_null()) slot = json::object();
    if (!slot.is_object()) fail("'" + path.back() + "' is not a table");
    return &slot;
  }

  void parse_key_value(json& table) {
    const auto path = parse_key();
    skip_ws();
    if (eof() || next() != '=') fail("expected '='");
    skip_ws();
    json value = parse_value();
    json* target = descend(table, path, path.size() - 1);
    if (target->contains(path.back())) fail("duplicate key '" + path.back() + "'");
    (*target)[path.back()] = std::move(value);
  }

  json parse_value() {
    const char c = peek();
    if (c == '"') return parse_basic_string();
    if (c == '\'') return parse_literal_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    std::string token;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                      peek() == '+' || peek() == '-' || peek() == '.' ||
                      peek() == '_')) {
      token.push_back(next());
    }
    if (token.empty()) fail("expected a value");
    if (token == "true") return true;
    if (token == "false") return false;
    return parse_number(token);
  }

  json parse_number(std::string token) {
    std::string digits;
    for (char ch : token) {
      if (ch != '_') digits.push_back(ch);
    }
    std::string_view body = digits;
    bool negative = false;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
      negative = body[0] == '-';
      body.remove_prefix(1);
    }
    if (body == "inf") {
      return negative ? -std::numeric_limits<double>::infinity()
                      : std::numeric_limits<double>::infinity();
    }
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    const bool is_float = body.find_first_of(".eE") != std::string_view::npos;
    if (!is_float) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
      if (ec != std::errc() || ptr != body.data() + body.size()) {
        fail("invalid value '" + token + "'");
      }
      return negative ? -v : v;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec != std::errc() || ptr != body.data() + body.size()) {
      fail("invalid number '" + token + "'");
    }
    return negative ? -v : v;
  }

  std::string parse_basic_string() {
    next();
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = next();
      if (c == '"') break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (eof()) fail("unterminated escape");
      const char e = next();
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'u': {
          if (pos_ + 4 > text_.size()) fail("short \\u escape");
          unsigned cp = 0;
          auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + pos_ + 4, cp, 16);
          if (ec != std::errc() || ptr != text_.data() + pos_ + 4) fail("bad \\u escape");
          pos_ += 4;
          if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
          } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
          } else {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
          }
          break;
        }
        default:
          fail(std::string("unsupported escape '\\") + e + "'");
      }
    }
    return out;
  }

  std::string parse_literal_string() {
    next();
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = next();
      if (c == '\'') break;
      out.push_back(c);
    }
    return out;
  }

  json parse_array() {
    next();
    json arr = json::array();
    while (true) {
      skip_blank_lines();
      if (peek() == ']') {
        next();
        return arr;
      }
      arr.push_back(parse_value());
      skip_blank_lines();
      if (peek() == ',') {
        next();
      } else if (peek() == ']') {
        next();
        return arr;
      } else {
        fail("expected ',' or ']' in array");
      }
    }
  }

  json parse_inline_table() {
    next();
    json table = json::object();
    skip_ws();
    if (peek() == '}') {
      next();
      return table;
    }
    while (true) {
      parse_key_value(table);
      skip_ws();
      const char c = eof() ? '\0' : next();
      if (c == '}') return table;
      if (c != ',') fail("expected ',' or '}' in inline table");
      skip_ws();
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::set<std::string> defined_;
  std::size_t line_ = 1;
};

}  // namespace

nlohmann::json parse_toml(std::string_view text) { return TomlParser(text).parse(); }

}  // namespace sensbench
