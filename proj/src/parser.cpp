#include "bilateral/parser.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "bilateral/errors.hpp"

namespace bilateral {

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

class Parser {
 public:
  Parser(std::string_view text, Signature& sig, bool infer)
      : text_(text), sig_(sig), infer_(infer) {}

  FormulaPtr parse() {
    auto f = parse_or();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("unexpected trailing input");
    }
    return f;
  }

 private:
  FormulaPtr parse_or() {
    auto left = parse_and();
    while (peek() == '|') {
      ++pos_;
      left = Formula::disjunction(std::move(left), parse_and());
    }
    return left;
  }

  FormulaPtr parse_and() {
    auto left = parse_unary();
    while (peek() == '&') {
      ++pos_;
      left = Formula::conjunction(std::move(left), parse_unary());
    }
    return left;
  }

  FormulaPtr parse_unary() {
    const char c = peek();
    if (c == '~') {
      ++pos_;
      return Formula::negation(parse_unary());
    }
    if (c == '[') {
      return parse_quantified();
    }
    if (c == '(') {
      ++pos_;
      auto inner = parse_or();
      expect(')');
      return inner;
    }
    return parse_atom();
  }

  FormulaPtr parse_quantified() {
    expect('[');
    const std::size_t kw_pos = next_token_pos();
    std::string keyword = read_ident("quantifier keyword");
    bool universal;
    if (keyword == "all") {
      universal = true;
    } else if (keyword == "some") {
      universal = false;
    } else {
      throw ParseError("expected \"all\" or \"some\" after '[', got \"" + keyword + "\"", kw_pos);
    }
    std::string variable = read_ident("quantifier variable");
    scope_.push_back(variable);
    auto restrictor = parse_or();
    scope_.pop_back();
    expect(']');
    scope_.push_back(variable);
    auto matrix = parse_unary();
    scope_.pop_back();
    return universal ? Formula::forall(std::move(variable), std::move(restrictor), std::move(matrix))
                     : Formula::exists(std::move(variable), std::move(restrictor), std::move(matrix));
  }

  FormulaPtr parse_atom() {
    const std::size_t rel_pos = next_token_pos();
    std::string relation = read_ident("relation symbol");
    auto it = sig_.relations.find(relation);
    if (it == sig_.relations.end() && !infer_) {
      throw UnknownSymbolError("unknown relation symbol: " + relation, rel_pos);
    }
    expect('(');
    std::vector<Term> args;
    while (true) {
      const std::size_t arg_pos = next_token_pos();
      std::string name = read_ident("atom argument");
      if (in_scope(name)) {
        args.push_back(Term::variable(std::move(name)));
      } else if (sig_.has_constant(name)) {
        args.push_back(Term::constant(std::move(name)));
      } else if (infer_) {
        sig_.constants.push_back(name);
        args.push_back(Term::constant(std::move(name)));
      } else {
        throw UnknownSymbolError("unknown constant: " + name, arg_pos);
      }
      skip_ws();
      if (peek_raw() == ',') {
        ++pos_;
        continue;
      }
      break;
    }
    expect(')');
    if (it == sig_.relations.end()) {
      sig_.relations.emplace(relation, args.size());
    } else if (args.size() != it->second) {
      throw ArityMismatchError("relation " + relation + " expects " + std::to_string(it->second) +
                                   " argument(s), got " + std::to_string(args.size()),
                               rel_pos);
    }
    return Formula::atom(std::move(relation), std::move(args));
  }

  bool in_scope(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (*it == name) {
        return true;
      }
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
      ++pos_;
    }
  }

  /// Next non-whitespace character, or '\0' at end. Does not consume.
  char peek() {
    skip_ws();
    return peek_raw();
  }

  char peek_raw() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  std::size_t next_token_pos() {
    skip_ws();
    return pos_;
  }

  void expect(char c) {
    skip_ws();
    if (peek_raw() != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  std::string read_ident(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
      ++pos_;
    }
    if (pos_ == start) {
      fail(std::string("expected ") + what);
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  [[noreturn]] void fail(const std::string& message) const {
    std::string got = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
    throw ParseError(message + " at position " + std::to_string(pos_) + ", got " + got, pos_);
  }

  std::string_view text_;
  Signature& sig_;
  bool infer_ = false;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text, const Signature& sig) {
  Signature scratch = sig;
  return Parser(text, scratch, false).parse();
}

std::pair<FormulaPtr, Signature> parse_formula_inferring(std::string_view text,
                                                         const Signature& base) {
  Signature sig = base;
  auto formula = Parser(text, sig, true).parse();
  return {std::move(formula), std::move(sig)};
}

}  // namespace bilateral
