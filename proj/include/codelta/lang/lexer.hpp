#pragma once

#include <codelta/lang/ast.hpp>
#include <codelta/rational.hpp>

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace codelta::lang {

// Error with a source position. The what() string already contains the span.
class LangError : public std::runtime_error {
 public:
  LangError(std::string kind, const Span& span, const std::string& msg)
      : std::runtime_error(kind + " error at " + span.to_string() + ": " + msg),
        kind_(std::move(kind)),
        span_(span),
        message_(msg) {}
  const Span& span() const { return span_; }
  const std::string& error_kind() const { return kind_; }
  const std::string& message() const { return message_; }

 private:
  std::string kind_;
  Span span_;
  std::string message_;
};

struct Token {
  enum class Kind {
    Ident,
    RatLit,     // nonnegative integer or fraction literal
    RealType,   // R^<nat>
    UnitType,   // I
    KwLet,
    KwIn,
    KwCoder,
    KwDerelict,
    KwWeaken,
    KwCoweaken,
    KwContract,
    KwCocontract,
    KwDiff,
    KwSeely,
    KwUnseely,
    KwFst,
    KwSnd,
    BangBlob,   // bang{...}, value holds the text between the braces
    Backslash,
    Dot,
    Colon,
    Equals,
    LParen,
    RParen,
    Comma,
    Plus,
    Lolli,      // -o
    Tensor,     // the three characters (x)
    BangSym,    // ! in types
    Amp,
    Lt,
    Gt,
    End,
  };

  Kind kind;
  std::string text;
  Rational rat;
  int nat = 0;
  Span span;
};

inline const char* token_name(Token::Kind k) {
  switch (k) {
    case Token::Kind::Ident: return "identifier";
    case Token::Kind::RatLit: return "rational literal";
    case Token::Kind::RealType: return "R^n";
    case Token::Kind::UnitType: return "I";
    case Token::Kind::KwLet: return "'let'";
    case Token::Kind::KwIn: return "'in'";
    case Token::Kind::KwCoder: return "'coder'";
    case Token::Kind::KwDerelict: return "'derelict'";
    case Token::Kind::KwWeaken: return "'weaken'";
    case Token::Kind::KwCoweaken: return "'coweaken'";
    case Token::Kind::KwContract: return "'contract'";
    case Token::Kind::KwCocontract: return "'cocontract'";
    case Token::Kind::KwDiff: return "'diff'";
    case Token::Kind::KwSeely: return "'seely'";
    case Token::Kind::KwUnseely: return "'unseely'";
    case Token::Kind::KwFst: return "'fst'";
    case Token::Kind::KwSnd: return "'snd'";
    case Token::Kind::BangBlob: return "bang{...}";
    case Token::Kind::Backslash: return "'\\'";
    case Token::Kind::Dot: return "'.'";
    case Token::Kind::Colon: return "':'";
    case Token::Kind::Equals: return "'='";
    case Token::Kind::LParen: return "'('";
    case Token::Kind::RParen: return "')'";
    case Token::Kind::Comma: return "','";
    case Token::Kind::Plus: return "'+'";
    case Token::Kind::Lolli: return "'-o'";
    case Token::Kind::Tensor: return "'(x)'";
    case Token::Kind::BangSym: return "'!'";
    case Token::Kind::Amp: return "'&'";
    case Token::Kind::Lt: return "'<'";
    case Token::Kind::Gt: return "'>'";
    case Token::Kind::End: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string text, int start_line = 1) : text_(std::move(text)), line_(start_line) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Span sp = here();
      if (pos_ >= text_.size()) {
        out.push_back({Token::Kind::End, "", 0, 0, sp});
        return out;
      }
      char c = text_[pos_];
      if (c == '#') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (c == '(') {
        // the exact sequence (x) is the tensor symbol; a parenthesized
        // variable x must be written with spaces, ( x )
        if (pos_ + 2 < text_.size() && text_[pos_ + 1] == 'x' && text_[pos_ + 2] == ')') {
          advance(); advance(); advance();
          out.push_back({Token::Kind::Tensor, "(x)", 0, 0, sp});
        } else {
          advance();
          out.push_back({Token::Kind::LParen, "(", 0, 0, sp});
        }
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(lex_number(sp));
        continue;
      }
      if (c == 'R' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '^') {
        out.push_back(lex_real_type(sp));
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back(lex_word(sp, out));
        continue;
      }
      switch (c) {
        case '\\': advance(); out.push_back({Token::Kind::Backslash, "\\", 0, 0, sp}); continue;
        case '.': advance(); out.push_back({Token::Kind::Dot, ".", 0, 0, sp}); continue;
        case ':': advance(); out.push_back({Token::Kind::Colon, ":", 0, 0, sp}); continue;
        case '=': advance(); out.push_back({Token::Kind::Equals, "=", 0, 0, sp}); continue;
        case ')': advance(); out.push_back({Token::Kind::RParen, ")", 0, 0, sp}); continue;
        case ',': advance(); out.push_back({Token::Kind::Comma, ",", 0, 0, sp}); continue;
        case '+': advance(); out.push_back({Token::Kind::Plus, "+", 0, 0, sp}); continue;
        case '!': advance(); out.push_back({Token::Kind::BangSym, "!", 0, 0, sp}); continue;
        case '&': advance(); out.push_back({Token::Kind::Amp, "&", 0, 0, sp}); continue;
        case '<': advance(); out.push_back({Token::Kind::Lt, "<", 0, 0, sp}); continue;
        case '>': advance(); out.push_back({Token::Kind::Gt, ">", 0, 0, sp}); continue;
        case '-':
          advance();
          if (pos_ < text_.size() && text_[pos_] == 'o') {
            advance();
            out.push_back({Token::Kind::Lolli, "-o", 0, 0, sp});
            continue;
          }
          throw LangError("syntax", sp, "stray '-'; the only use is the arrow '-o'");
        default:
          throw LangError("syntax", sp, std::string("unexpected character '") + c + "'");
      }
    }
  }

 private:
  Span here() const { return {line_, col_}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' || text_[pos_] == '\n'))
      advance();
  }

  Token lex_number(Span sp) {
    std::string num;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      num += text_[pos_];
      advance();
    }
    if (pos_ < text_.size() && text_[pos_] == '/') {
      advance();
      std::string den;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        den += text_[pos_];
        advance();
      }
      if (den.empty()) throw LangError("syntax", here(), "fraction literal needs a denominator");
      return {Token::Kind::RatLit, num + "/" + den, parse_rational(num + "/" + den), 0, sp};
    }
    return {Token::Kind::RatLit, num, parse_rational(num), 0, sp};
  }

  Token lex_real_type(Span sp) {
    advance();  // R
    advance();  // ^
    std::string num;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      num += text_[pos_];
      advance();
    }
    if (num.empty()) throw LangError("syntax", here(), "R^ needs a dimension");
    int n = 0;
    try {
      n = std::stoi(num);
    } catch (const std::out_of_range&) {
      throw LangError("syntax", sp, "dimension " + num + " is out of range");
    }
    return {Token::Kind::RealType, "R^" + num, 0, n, sp};
  }

  Token lex_word(Span sp, std::vector<Token>&) {
    std::string w;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\'')) {
      w += text_[pos_];
      advance();
    }
    if (w == "I") return {Token::Kind::UnitType, w, 0, 0, sp};
    if (w == "let") return {Token::Kind::KwLet, w, 0, 0, sp};
    if (w == "in") return {Token::Kind::KwIn, w, 0, 0, sp};
    if (w == "coder") return {Token::Kind::KwCoder, w, 0, 0, sp};
    if (w == "derelict") return {Token::Kind::KwDerelict, w, 0, 0, sp};
    if (w == "weaken") return {Token::Kind::KwWeaken, w, 0, 0, sp};
    if (w == "coweaken") return {Token::Kind::KwCoweaken, w, 0, 0, sp};
    if (w == "contract") return {Token::Kind::KwContract, w, 0, 0, sp};
    if (w == "cocontract") return {Token::Kind::KwCocontract, w, 0, 0, sp};
    if (w == "diff") return {Token::Kind::KwDiff, w, 0, 0, sp};
    if (w == "seely") return {Token::Kind::KwSeely, w, 0, 0, sp};
    if (w == "unseely") return {Token::Kind::KwUnseely, w, 0, 0, sp};
    if (w == "fst") return {Token::Kind::KwFst, w, 0, 0, sp};
    if (w == "snd") return {Token::Kind::KwSnd, w, 0, 0, sp};
    if (w == "bang") {
      // the polynomial literal bang{...}: capture the raw text between the
      // braces, tracking brace depth and skipping string literals
      std::size_t save_pos = pos_;
      int save_line = line_, save_col = col_;
      while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) advance();
      if (pos_ >= text_.size() || text_[pos_] != '{') {
        pos_ = save_pos;
        line_ = save_line;
        col_ = save_col;
        throw LangError("syntax", sp, "'bang' must be followed by a {...} polynomial literal");
      }
      advance();  // {
      std::string blob;
      int depth = 1;
      bool in_string = false;
      while (pos_ < text_.size()) {
        char c = text_[pos_];
        if (in_string) {
          if (c == '\\' && pos_ + 1 < text_.size()) {
            blob += c;
            advance();
            blob += text_[pos_];
            advance();
            continue;
          }
          if (c == '"') in_string = false;
        } else if (c == '"') {
          in_string = true;
        } else if (c == '{') {
          ++depth;
        } else if (c == '}') {
          --depth;
          if (depth == 0) {
            advance();
            return {Token::Kind::BangBlob, blob, 0, 0, sp};
          }
        }
        blob += c;
        advance();
      }
      throw LangError("syntax", sp, "unterminated bang{...} literal");
    }
    return {Token::Kind::Ident, w, 0, 0, sp};
  }

  std::string text_;
  std::size_t pos_ = 0;
  int line_;
  int col_ = 1;
};

}  // namespace codelta::lang
