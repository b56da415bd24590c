#include "pald/text.hpp"

#include <optional>
#include <vector>

namespace pald {

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error("parse error at " + std::to_string(position) + ": " + message),
      position_(position) {}

namespace {

enum class Tok {
  Ident,
  Tilde,
  Amp,
  Bar,
  Arrow,
  DArrow,
  EqEq,
  NotEq,
  Assign,
  LParen,
  RParen,
  LBrack,
  RBrack,
  End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view lit) { return s.substr(i, lit.size()) == lit; };
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t j = i;
      while (j < s.size() && ((s[j] >= 'a' && s[j] <= 'z') || (s[j] >= '0' && s[j] <= '9') ||
                              s[j] == '_'))
        ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    static constexpr std::pair<std::string_view, Tok> symbols[] = {
        {"<->", Tok::DArrow}, {"->", Tok::Arrow}, {"==", Tok::EqEq},  {"!=", Tok::NotEq},
        {":=", Tok::Assign},  {"~", Tok::Tilde},  {"&", Tok::Amp},    {"|", Tok::Bar},
        {"(", Tok::LParen},   {")", Tok::RParen}, {"[", Tok::LBrack}, {"]", Tok::RBrack},
    };
    bool matched = false;
    for (auto [lit, kind] : symbols) {
      if (starts(lit)) {
        out.push_back({kind, std::string(lit), i});
        i += lit.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(i, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  BoolForm whole_bool() {
    auto f = try_bool();
    if (!f) fail();
    expect_end();
    return *f;
  }

  Form whole_form() {
    auto f = form();
    expect_end();
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const { return at(Tok::Ident) && peek().text == w; }

  // Records the furthest failure so backtracking reports a useful position.
  void note(std::string message) {
    const auto& t = peek();
    if (!err_ || t.pos >= err_->first) err_ = std::pair{t.pos, std::move(message)};
  }
  [[noreturn]] void fail() {
    if (err_) throw ParseError(err_->first, err_->second);
    throw ParseError(peek().pos, "unexpected " + describe(peek()));
  }
  [[noreturn]] void fail_here(const std::string& message) {
    throw ParseError(peek().pos, message);
  }

  void expect(Tok k, std::string_view what) {
    if (!at(k)) fail_here("expected " + std::string(what) + ", found " + describe(peek()));
    ++pos_;
  }
  void expect_end() {
    if (!at(Tok::End)) {
      note("unexpected " + describe(peek()) + " after formula");
      if (err_ && err_->first > peek().pos) fail();
      fail_here("unexpected " + describe(peek()) + " after formula");
    }
  }

  std::string identifier(std::string_view what) {
    if (!at(Tok::Ident) || is_reserved_word(peek().text))
      fail_here("expected " + std::string(what) + ", found " + describe(peek()));
    return toks_[pos_++].text;
  }

  // P ::= atom | ~P | (P & P)
  std::optional<BoolForm> try_bool() {
    const auto start = pos_;
    if (at(Tok::Ident)) {
      if (is_reserved_word(peek().text)) {
        note("expected atom, found keyword " + describe(peek()));
        return std::nullopt;
      }
      return BoolForm::atom(toks_[pos_++].text);
    }
    if (at(Tok::Tilde)) {
      ++pos_;
      if (auto in = try_bool()) return BoolForm::neg(std::move(*in));
      pos_ = start;
      return std::nullopt;
    }
    if (at(Tok::LParen)) {
      ++pos_;
      auto l = try_bool();
      if (l) {
        if (at(Tok::Amp)) {
          ++pos_;
          auto r = try_bool();
          if (r) {
            if (at(Tok::RParen)) {
              ++pos_;
              return BoolForm::conj(std::move(*l), std::move(*r));
            }
            note("expected ')' closing conjunction, found " + describe(peek()));
          }
        } else {
          note("expected '&' in parenthesised boolean formula, found " + describe(peek()));
        }
      }
      pos_ = start;
      return std::nullopt;
    }
    if (at(Tok::End))
      note("unexpected end of input");
    else
      note("expected boolean formula, found " + describe(peek()));
    return std::nullopt;
  }

  BoolForm bool_operand() {
    auto f = try_bool();
    if (!f) fail();
    return *f;
  }

  Form form() { return iff_expr(); }

  Form iff_expr() {
    auto l = imp_expr();
    while (at(Tok::DArrow)) {
      ++pos_;
      l = iff(l, imp_expr());
    }
    return l;
  }

  Form imp_expr() {
    auto l = or_expr();
    if (at(Tok::Arrow)) {
      ++pos_;
      return implies(l, imp_expr());
    }
    return l;
  }

  Form or_expr() {
    auto l = and_expr();
    while (at(Tok::Bar)) {
      ++pos_;
      l = disj(l, and_expr());
    }
    return l;
  }

  Form and_expr() {
    auto l = unary();
    while (at(Tok::Amp)) {
      ++pos_;
      l = Form::conj(l, unary());
    }
    return l;
  }

  Form unary() {
    // A boolean formula followed by == or != binds before any full-language
    // reading, so "~p == q" is (~p == q) and "(p & q) == r" works.
    {
      const auto start = pos_;
      if (auto lhs = try_bool()) {
        if (at(Tok::EqEq) || at(Tok::NotEq)) {
          bool positive = at(Tok::EqEq);
          ++pos_;
          auto rhs = bool_operand();
          auto eq = Form::equiv(std::move(*lhs), std::move(rhs));
          return positive ? eq : Form::neg(eq);
        }
      }
      pos_ = start;
    }
    if (at(Tok::Tilde)) {
      ++pos_;
      return Form::neg(unary());
    }
    if (at_word("box")) {
      ++pos_;
      Agent a(identifier("agent"));
      return Form::box(std::move(a), unary());
    }
    if (at_word("kd")) {
      ++pos_;
      Agent a(identifier("agent"));
      return Form::kd(std::move(a), bool_operand());
    }
    if (at_word("kx")) {
      ++pos_;
      Agent a(identifier("agent"));
      return kx(a, bool_operand());
    }
    if (at(Tok::LBrack)) {
      ++pos_;
      auto announced = form();
      expect(Tok::RBrack, "']'");
      return Form::announce(std::move(announced), unary());
    }
    if (at(Tok::LParen)) {
      ++pos_;
      auto f = form();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at(Tok::Ident)) {
      Atom a(identifier("atom"));
      if (at(Tok::Assign)) {
        ++pos_;
        return Form::def_is(std::move(a), bool_operand());
      }
      return Form::atom(std::move(a));
    }
    fail_here("expected formula, found " + describe(peek()));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::optional<std::pair<std::size_t, std::string>> err_;
};

void print(const BoolForm& f, std::string& out) {
  switch (f.kind()) {
    case BoolForm::Kind::Atom:
      out += f.atom().name();
      return;
    case BoolForm::Kind::Neg:
      out += '~';
      print(f.inner(), out);
      return;
    case BoolForm::Kind::And:
      out += '(';
      print(f.left(), out);
      out += " & ";
      print(f.right(), out);
      out += ')';
      return;
  }
}

void print(const Form& f, std::string& out);

void print_binary(const Form& a, std::string_view op, const Form& b, std::string& out) {
  out += '(';
  print(a, out);
  out += op;
  print(b, out);
  out += ')';
}

void print(const Form& f, std::string& out) {
  switch (f.kind()) {
    case Form::Kind::Atom:
      out += f.atom().name();
      return;
    case Form::Kind::Equiv:
    case Form::Kind::Neg:
      if (f.kind() == Form::Kind::Neg) {
        if (auto m = match_implies(f)) return print_binary(m->first, " -> ", m->second, out);
        if (auto m = match_disj(f)) return print_binary(m->first, " | ", m->second, out);
        auto in = f.inner();
        if (in.kind() != Form::Kind::Equiv) {
          out += '~';
          print(in, out);
          return;
        }
        out += '(';
        print(in.bool_lhs(), out);
        out += " != ";
        print(in.bool_rhs(), out);
        out += ')';
        return;
      }
      out += '(';
      print(f.bool_lhs(), out);
      out += " == ";
      print(f.bool_rhs(), out);
      out += ')';
      return;
    case Form::Kind::And: {
      if (auto m = match_iff(f)) return print_binary(m->first, " <-> ", m->second, out);
      auto l = f.left(), r = f.right();
      if (l.kind() == Form::Kind::Box && r.kind() == Form::Kind::Kd &&
          l.agent() == r.agent() && l.inner() == to_form(r.bool_lhs())) {
        out += "kx " + r.agent().name() + ' ';
        print(r.bool_lhs(), out);
        return;
      }
      return print_binary(l, " & ", r, out);
    }
    case Form::Kind::Box:
      out += "box " + f.agent().name() + ' ';
      print(f.inner(), out);
      return;
    case Form::Kind::Ann:
      out += '[';
      print(f.announced(), out);
      out += ']';
      print(f.inner(), out);
      return;
    case Form::Kind::Kd:
      out += "kd " + f.agent().name() + ' ';
      print(f.bool_lhs(), out);
      return;
    case Form::Kind::DefIs:
      out += '(' + f.atom().name() + " := ";
      print(f.bool_lhs(), out);
      out += ')';
      return;
  }
}

}  // namespace

BoolForm parse_bool(std::string_view text) { return Parser(text).whole_bool(); }

Form parse_form(std::string_view text) { return Parser(text).whole_form(); }

std::string to_string(const BoolForm& f) {
  std::string out;
  print(f, out);
  return out;
}

std::string to_string(const Form& f) {
  std::string out;
  print(f, out);
  return out;
}

}  // namespace pald
