/* Copyright 2026 The Echotrain Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "echotrain/seq/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <vector>

#include "echotrain/seq/errors.hpp"
#include "echotrain/seq/units.hpp"

namespace echotrain::seq {

namespace {

enum class TokKind { Ident, Number, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_ws_and_comments();
    Token tok;
    tok.line = line_;
    tok.col = col_;
    if (pos_ >= text_.size()) return tok;  // End
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      tok.kind = TokKind::Ident;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(
                                         text_[pos_])) ||
                                     text_[pos_] == '_'))
        tok.text += take();
      return tok;
    }
    // '-' binds to an identifier ("-y") or a number ("-1ms"); on its own
    // it is punctuation and will be rejected by the grammar.
    if (c == '-' && pos_ + 1 < text_.size() &&
        std::isalpha(static_cast<unsigned char>(text_[pos_ + 1]))) {
      tok.kind = TokKind::Ident;
      tok.text += take();
      while (pos_ < text_.size() &&
             std::isalpha(static_cast<unsigned char>(text_[pos_])))
        tok.text += take();
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
        ((c == '-' || c == '+') && pos_ + 1 < text_.size() &&
         (std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
          text_[pos_ + 1] == '.'))) {
      // Number with optional exponent and optional unit suffix (us/ms/s).
      tok.kind = TokKind::Number;
      if (c == '-' || c == '+') tok.text += take();
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '.'))
        tok.text += take();
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        std::size_t save = pos_;
        std::string exp;
        exp += take();
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
          exp += take();
        if (pos_ < text_.size() &&
            std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          while (pos_ < text_.size() &&
                 std::isdigit(static_cast<unsigned char>(text_[pos_])))
            exp += take();
          tok.text += exp;
        } else {
          pos_ = save;  // "e" here starts a unit or is junk, not an exponent
        }
      }
      while (pos_ < text_.size() &&
             std::isalpha(static_cast<unsigned char>(text_[pos_])))
        tok.text += take();
      return tok;
    }
    tok.kind = TokKind::Punct;
    tok.text += take();
    return tok;
  }

 private:
  char take() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_ws_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        return;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Un-expanded statement tree; blocks are unrolled in emit().
struct Stmt {
  enum class Kind { Pulse, Delay, Acquire, Block } kind;
  double angle_deg = 0.0;
  std::vector<double> phases_deg;  // one entry unless a {...} list
  double duration = 0.0;
  double dwell = 0.0;
  long repeat = 1;
  std::vector<Stmt> body;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) { advance(); }

  std::vector<Stmt> parse_all() {
    std::vector<Stmt> stmts;
    while (cur_.kind != TokKind::End) stmts.push_back(parse_statement());
    return stmts;
  }

 private:
  [[noreturn]] void fail(const Token& tok, const std::string& msg) const {
    throw SyntaxError(tok.line, tok.col, msg);
  }

  void advance() { cur_ = lex_.next(); }

  Token expect_punct(char c) {
    if (cur_.kind != TokKind::Punct || cur_.text[0] != c)
      fail(cur_, std::string("expected '") + c + "', got '" + describe(cur_) +
                     "'");
    Token tok = cur_;
    advance();
    return tok;
  }

  static std::string describe(const Token& tok) {
    return tok.kind == TokKind::End ? "end of input" : tok.text;
  }

  double expect_number(const std::string& what) {
    if (cur_.kind != TokKind::Number)
      fail(cur_, "expected " + what + ", got '" + describe(cur_) + "'");
    const char* begin = cur_.text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
      fail(cur_, "malformed " + what + " '" + cur_.text + "'");
    advance();
    return v;
  }

  double expect_duration(const std::string& what) {
    if (cur_.kind != TokKind::Number)
      fail(cur_, "expected " + what + ", got '" + describe(cur_) + "'");
    double v;
    try {
      v = parse_duration(cur_.text);
    } catch (const std::invalid_argument& e) {
      fail(cur_, std::string(e.what()));
    }
    advance();
    return v;
  }

  double parse_phase() {
    Token tok = cur_;
    if (tok.kind == TokKind::Ident) {
      advance();
      if (tok.text == "x") return 0.0;
      if (tok.text == "y") return 90.0;
      if (tok.text == "-x") return 180.0;
      if (tok.text == "-y") return 270.0;
      throw UnknownPhaseError(tok.line, tok.col,
                              "unknown phase '" + tok.text + "'");
    }
    if (tok.kind == TokKind::Number) {
      double deg = expect_number("phase");
      deg = std::fmod(deg, 360.0);
      if (deg < 0.0) deg += 360.0;
      return deg;
    }
    throw UnknownPhaseError(tok.line, tok.col,
                            "unknown phase '" + describe(tok) + "'");
  }

  Stmt parse_statement() {
    if (cur_.kind == TokKind::Punct && cur_.text[0] == '[') return parse_block();
    if (cur_.kind != TokKind::Ident)
      fail(cur_, "expected statement, got '" + describe(cur_) + "'");
    Token head = cur_;
    advance();
    Stmt s;
    if (head.text == "p") {
      s.kind = Stmt::Kind::Pulse;
      expect_punct('(');
      s.angle_deg = expect_number("flip angle");
      expect_punct(',');
      if (cur_.kind == TokKind::Punct && cur_.text[0] == '{') {
        advance();
        s.phases_deg.push_back(parse_phase());
        while (cur_.kind == TokKind::Punct && cur_.text[0] == ',') {
          advance();
          s.phases_deg.push_back(parse_phase());
        }
        expect_punct('}');
      } else {
        s.phases_deg.push_back(parse_phase());
      }
      expect_punct(')');
      return s;
    }
    if (head.text == "d") {
      s.kind = Stmt::Kind::Delay;
      expect_punct('(');
      s.duration = expect_duration("delay duration");
      expect_punct(')');
      return s;
    }
    if (head.text == "acq") {
      s.kind = Stmt::Kind::Acquire;
      expect_punct('(');
      if (!(cur_.kind == TokKind::Punct && cur_.text[0] == ')')) {
        s.duration = expect_duration("acquisition window");
        expect_punct(',');
        s.dwell = expect_duration("dwell time");
      }
      expect_punct(')');
      return s;
    }
    fail(head, "unknown statement '" + head.text + "'");
  }

  Stmt parse_block() {
    expect_punct('[');
    Stmt s;
    s.kind = Stmt::Kind::Block;
    while (!(cur_.kind == TokKind::Punct && cur_.text[0] == ']')) {
      if (cur_.kind == TokKind::End) fail(cur_, "unterminated block");
      s.body.push_back(parse_statement());
    }
    expect_punct(']');
    expect_punct('*');
    Token count_tok = cur_;
    double count = expect_number("repetition count");
    s.repeat = static_cast<long>(count);
    if (count != static_cast<double>(s.repeat) || s.repeat < 1)
      throw ValidationError("repetition count '" + count_tok.text +
                            "' must be a positive integer");
    return s;
  }

  Lexer lex_;
  Token cur_;
};

// Unrolls blocks depth first; a phase list indexes with the iteration of
// the innermost enclosing block (top level counts as iteration 0).
void emit(const std::vector<Stmt>& stmts, long iteration, double& cursor,
          std::vector<PulseEvent>& out) {
  for (const Stmt& s : stmts) {
    switch (s.kind) {
      case Stmt::Kind::Pulse: {
        PulseEvent e;
        e.kind = EventKind::RfPulse;
        e.start = cursor;
        e.angle_deg = s.angle_deg;
        e.phase_deg =
            s.phases_deg[static_cast<std::size_t>(iteration) % s.phases_deg.size()];
        out.push_back(e);
        break;
      }
      case Stmt::Kind::Delay: {
        PulseEvent e;
        e.kind = EventKind::Delay;
        e.start = cursor;
        e.duration = s.duration;
        cursor += s.duration;
        out.push_back(e);
        break;
      }
      case Stmt::Kind::Acquire: {
        PulseEvent e;
        e.kind = EventKind::Acquire;
        e.start = cursor;
        e.duration = s.duration;
        e.dwell = s.dwell;
        cursor += s.duration;
        out.push_back(e);
        break;
      }
      case Stmt::Kind::Block:
        for (long i = 0; i < s.repeat; ++i) emit(s.body, i, cursor, out);
        break;
    }
  }
}

}  // namespace

PulseProgram parse_program(const std::string& text) {
  Parser parser(text);
  std::vector<Stmt> stmts = parser.parse_all();
  PulseProgram prog;
  double cursor = 0.0;
  emit(stmts, 0, cursor, prog.events);
  prog.total_duration = cursor;
  prog.validate();
  return prog;
}

}  // namespace echotrain::seq
