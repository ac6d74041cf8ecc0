// Copyright 2026 The hcct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Recognizer for the Graphviz DOT language (graph, stmt_list, node/edge/attr
// statements, subgraphs, ports, all four ID forms). Test-only.

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hcct::testing {

class DotChecker {
 public:
  /// Throws std::runtime_error describing the first syntax error.
  static void check(std::string_view src) {
    DotChecker c(src);
    c.tokenize();
    c.graph();
    if (c.pos_ != c.toks_.size()) c.fail("trailing tokens");
  }

  static bool valid(std::string_view src) {
    try {
      check(src);
      return true;
    } catch (const std::runtime_error&) {
      return false;
    }
  }

 private:
  enum class T { Id, LBrace, RBrace, LBrack, RBrack, Eq, Semi, Comma, Colon, EdgeOp };
  struct Tok {
    T type;
    std::string text;
  };

  explicit DotChecker(std::string_view src) : src_(src) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("DOT syntax error: " + what);
  }

  static bool keyword(const std::string& s, const char* kw) {
    if (s.size() != std::char_traits<char>::length(kw)) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(s[i])) != kw[i]) return false;
    }
    return true;
  }

  void tokenize() {
    std::size_t i = 0;
    const std::size_t n = src_.size();
    while (i < n) {
      char c = src_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '/' && i + 1 < n && src_[i + 1] == '/') {
        while (i < n && src_[i] != '\n') ++i;
      } else if (c == '/' && i + 1 < n && src_[i + 1] == '*') {
        auto end = src_.find("*/", i + 2);
        if (end == std::string_view::npos) fail("unterminated comment");
        i = end + 2;
      } else if (c == '#' && (i == 0 || src_[i - 1] == '\n')) {
        while (i < n && src_[i] != '\n') ++i;
      } else if (c == '{') { toks_.push_back({T::LBrace, "{"}); ++i; }
      else if (c == '}') { toks_.push_back({T::RBrace, "}"}); ++i; }
      else if (c == '[') { toks_.push_back({T::LBrack, "["}); ++i; }
      else if (c == ']') { toks_.push_back({T::RBrack, "]"}); ++i; }
      else if (c == '=') { toks_.push_back({T::Eq, "="}); ++i; }
      else if (c == ';') { toks_.push_back({T::Semi, ";"}); ++i; }
      else if (c == ',') { toks_.push_back({T::Comma, ","}); ++i; }
      else if (c == ':') { toks_.push_back({T::Colon, ":"}); ++i; }
      else if (c == '-' && i + 1 < n && (src_[i + 1] == '>' || src_[i + 1] == '-')) {
        toks_.push_back({T::EdgeOp, std::string(src_.substr(i, 2))});
        i += 2;
      } else if (c == '"') {
        std::string s;
        ++i;
        for (;;) {
          if (i >= n) fail("unterminated string");
          if (src_[i] == '\\' && i + 1 < n) {
            s += src_[i];
            s += src_[i + 1];
            i += 2;
          } else if (src_[i] == '"') {
            ++i;
            break;
          } else {
            s += src_[i++];
          }
        }
        toks_.push_back({T::Id, "\"" + s + "\""});
      } else if (c == '<') {
        int depth = 0;
        std::size_t start = i;
        do {
          if (i >= n) fail("unterminated HTML string");
          if (src_[i] == '<') ++depth;
          if (src_[i] == '>') --depth;
          ++i;
        } while (depth > 0);
        toks_.push_back({T::Id, std::string(src_.substr(start, i - start))});
      } else if (c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = i;
        if (c == '-') ++i;
        bool digits = false;
        while (i < n && std::isdigit(static_cast<unsigned char>(src_[i]))) { ++i; digits = true; }
        if (i < n && src_[i] == '.') {
          ++i;
          while (i < n && std::isdigit(static_cast<unsigned char>(src_[i]))) { ++i; digits = true; }
        }
        if (!digits) fail("bad numeral");
        toks_.push_back({T::Id, std::string(src_.substr(start, i - start))});
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
                 static_cast<unsigned char>(c) >= 0x80) {
        std::size_t start = i;
        while (i < n && (std::isalnum(static_cast<unsigned char>(src_[i])) || src_[i] == '_' ||
                         static_cast<unsigned char>(src_[i]) >= 0x80)) {
          ++i;
        }
        toks_.push_back({T::Id, std::string(src_.substr(start, i - start))});
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
    }
  }

  bool at(T t) const { return pos_ < toks_.size() && toks_[pos_].type == t; }
  bool at_kw(const char* kw) const { return at(T::Id) && keyword(toks_[pos_].text, kw); }
  void expect(T t, const char* what) {
    if (!at(t)) fail(std::string("expected ") + what);
    ++pos_;
  }

  void graph() {
    if (at_kw("strict")) ++pos_;
    if (at_kw("digraph")) {
      directed_ = true;
    } else if (!at_kw("graph")) {
      fail("expected 'graph' or 'digraph'");
    }
    ++pos_;
    if (at(T::Id)) ++pos_;
    expect(T::LBrace, "'{'");
    stmt_list();
    expect(T::RBrace, "'}'");
  }

  void stmt_list() {
    while (!at(T::RBrace)) {
      if (pos_ >= toks_.size()) fail("unexpected end of input");
      stmt();
      if (at(T::Semi)) ++pos_;
    }
  }

  void stmt() {
    if (at_kw("graph") || at_kw("node") || at_kw("edge")) {
      ++pos_;
      attr_list(true);
      return;
    }
    if (at_kw("subgraph") || at(T::LBrace)) {
      subgraph();
      if (at(T::EdgeOp)) edge_rhs();
      if (at(T::LBrack)) attr_list(true);
      return;
    }
    if (!at(T::Id)) fail("expected statement");
    if (pos_ + 1 < toks_.size() && toks_[pos_ + 1].type == T::Eq) {
      pos_ += 2;
      expect(T::Id, "ID after '='");
      return;
    }
    node_id();
    if (at(T::EdgeOp)) edge_rhs();
    if (at(T::LBrack)) attr_list(true);
  }

  void subgraph() {
    if (at_kw("subgraph")) {
      ++pos_;
      if (at(T::Id)) ++pos_;
    }
    expect(T::LBrace, "'{'");
    stmt_list();
    expect(T::RBrace, "'}'");
  }

  void edge_rhs() {
    while (at(T::EdgeOp)) {
      if ((toks_[pos_].text == "->") != directed_) fail("edge operator does not match graph type");
      ++pos_;
      if (at_kw("subgraph") || at(T::LBrace)) {
        subgraph();
      } else {
        node_id();
      }
    }
  }

  void node_id() {
    expect(T::Id, "node ID");
    if (at(T::Colon)) {
      ++pos_;
      expect(T::Id, "port");
      if (at(T::Colon)) {
        ++pos_;
        expect(T::Id, "compass point");
      }
    }
  }

  void attr_list(bool required) {
    if (required && !at(T::LBrack)) fail("expected '['");
    while (at(T::LBrack)) {
      ++pos_;
      while (at(T::Id)) {
        ++pos_;
        expect(T::Eq, "'=' in attribute");
        expect(T::Id, "attribute value");
        if (at(T::Semi) || at(T::Comma)) ++pos_;
      }
      expect(T::RBrack, "']'");
    }
  }

  std::string_view src_;
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  bool directed_ = false;
};

}  // namespace hcct::testing
