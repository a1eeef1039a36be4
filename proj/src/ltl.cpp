#include "maxreal/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace maxreal::ltl {

namespace {
Formula mk(Op op, std::string atom = {}, Formula lhs = nullptr, Formula rhs = nullptr) {
  return std::make_shared<Node>(op, std::move(atom), std::move(lhs), std::move(rhs));
}
}  // namespace

Formula f_true() {
  static const Formula t = mk(Op::True);
  return t;
}
Formula f_false() {
  static const Formula f = mk(Op::False);
  return f;
}
Formula f_atom(const std::string& name) { return mk(Op::Atom, name); }
Formula f_not(Formula a) { return mk(Op::Not, {}, std::move(a)); }
Formula f_and(Formula a, Formula b) { return mk(Op::And, {}, std::move(a), std::move(b)); }
Formula f_or(Formula a, Formula b) { return mk(Op::Or, {}, std::move(a), std::move(b)); }
Formula f_implies(Formula a, Formula b) { return mk(Op::Implies, {}, std::move(a), std::move(b)); }
Formula f_next(Formula a) { return mk(Op::Next, {}, std::move(a)); }
Formula f_finally(Formula a) { return mk(Op::Finally, {}, std::move(a)); }
Formula f_globally(Formula a) { return mk(Op::Globally, {}, std::move(a)); }
Formula f_until(Formula a, Formula b) { return mk(Op::Until, {}, std::move(a), std::move(b)); }
Formula f_release(Formula a, Formula b) { return mk(Op::Release, {}, std::move(a), std::move(b)); }

Formula f_and_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return f_true();
  Formula r = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) r = f_and(r, fs[i]);
  return r;
}

Formula f_or_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return f_false();
  Formula r = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) r = f_or(r, fs[i]);
  return r;
}

int compare(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return 0;
  if (a->op != b->op) return a->op < b->op ? -1 : 1;
  if (a->op == Op::Atom) return a->atom.compare(b->atom);
  if (a->lhs) {
    if (int c = compare(a->lhs, b->lhs)) return c;
  }
  if (a->rhs) {
    if (int c = compare(a->rhs, b->rhs)) return c;
  }
  return 0;
}

bool equal(const Formula& a, const Formula& b) { return compare(a, b) == 0; }

namespace {

// Grammar precedence: ! X F G bind tightest; then U R (right-assoc);
// then &; then |; then -> (right-assoc).
int precedence(Op op) {
  switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Until:
    case Op::Release: return 4;
    default: return 5;
  }
}

void print(std::ostream& os, const Formula& f, int parent_prec) {
  int prec = precedence(f->op);
  bool paren = prec < parent_prec;
  if (paren) os << '(';
  switch (f->op) {
    case Op::True: os << "true"; break;
    case Op::False: os << "false"; break;
    case Op::Atom: os << f->atom; break;
    case Op::Not:
      os << '!';
      print(os, f->lhs, prec + 1);
      break;
    case Op::Next:
      os << "X ";
      print(os, f->lhs, prec + 1);
      break;
    case Op::Finally:
      os << "F ";
      print(os, f->lhs, prec + 1);
      break;
    case Op::Globally:
      os << "G ";
      print(os, f->lhs, prec + 1);
      break;
    case Op::And:
      print(os, f->lhs, prec);
      os << " & ";
      print(os, f->rhs, prec + 1);
      break;
    case Op::Or:
      print(os, f->lhs, prec);
      os << " | ";
      print(os, f->rhs, prec + 1);
      break;
    case Op::Implies:
      print(os, f->lhs, prec + 1);
      os << " -> ";
      print(os, f->rhs, prec);
      break;
    case Op::Until:
      print(os, f->lhs, prec + 1);
      os << " U ";
      print(os, f->rhs, prec);
      break;
    case Op::Release:
      print(os, f->lhs, prec + 1);
      os << " R ";
      print(os, f->rhs, prec);
      break;
  }
  if (paren) os << ')';
}

}  // namespace

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print(os, f, 0);
  return os.str();
}

namespace {

struct Token {
  enum Kind { Ident, LParen, RParen, Bang, Amp, Pipe, Arrow, End } kind;
  std::string text;
  int line, column;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    int line = line_, col = col_;
    if (pos_ >= text_.size()) {
      tok_ = {Token::End, "", line, col};
      return;
    }
    char c = text_[pos_];
    auto single = [&](Token::Kind k, const char* s) {
      ++pos_;
      ++col_;
      tok_ = {k, s, line, col};
    };
    switch (c) {
      case '(': return single(Token::LParen, "(");
      case ')': return single(Token::RParen, ")");
      case '!': return single(Token::Bang, "!");
      case '&': return single(Token::Amp, "&");
      case '|': return single(Token::Pipe, "|");
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          pos_ += 2;
          col_ += 2;
          tok_ = {Token::Arrow, "->", line, col};
          return;
        }
        throw ParseError("unknown token '-'", line, col);
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
        ++col_;
      }
      tok_ = {Token::Ident, text_.substr(start, pos_ - start), line, col};
      return;
    }
    throw ParseError(std::string("unknown token '") + c + "'", line, col);
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
public:
  explicit Parser(const std::string& text) : lex_(text) {}

  Formula parse() {
    Formula f = implies();
    const Token& t = lex_.peek();
    if (t.kind != Token::End)
      throw ParseError("unexpected token '" + t.text + "'", t.line, t.column);
    return f;
  }

private:
  Formula implies() {
    Formula lhs = disj();
    if (lex_.peek().kind == Token::Arrow) {
      lex_.next();
      return f_implies(lhs, implies());
    }
    return lhs;
  }

  Formula disj() {
    Formula f = conj();
    while (lex_.peek().kind == Token::Pipe) {
      lex_.next();
      f = f_or(f, conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = untilRelease();
    while (lex_.peek().kind == Token::Amp) {
      lex_.next();
      f = f_and(f, untilRelease());
    }
    return f;
  }

  Formula untilRelease() {
    Formula lhs = unary();
    const Token& t = lex_.peek();
    if (t.kind == Token::Ident && (t.text == "U" || t.text == "R")) {
      bool until = t.text == "U";
      lex_.next();
      Formula rhs = untilRelease();
      return until ? f_until(lhs, rhs) : f_release(lhs, rhs);
    }
    return lhs;
  }

  Formula unary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Token::Bang:
        lex_.next();
        return f_not(unary());
      case Token::LParen: {
        lex_.next();
        Formula f = implies();
        const Token& close = lex_.peek();
        if (close.kind != Token::RParen)
          throw ParseError("expected ')'", close.line, close.column);
        lex_.next();
        return f;
      }
      case Token::Ident: {
        Token id = lex_.next();
        if (id.text == "true") return f_true();
        if (id.text == "false") return f_false();
        if (id.text == "X") return f_next(unary());
        if (id.text == "F") return f_finally(unary());
        if (id.text == "G") return f_globally(unary());
        if (id.text == "U" || id.text == "R")
          throw ParseError("'" + id.text + "' needs a left operand", id.line, id.column);
        return f_atom(id.text);
      }
      default:
        throw ParseError("expected a formula, got '" + t.text + "'", t.line, t.column);
    }
  }

  Lexer lex_;
};

}  // namespace

Formula parse(const std::string& text) { return Parser(text).parse(); }

namespace {

Formula nnf(const Formula& f, bool negated) {
  switch (f->op) {
    case Op::True: return negated ? f_false() : f_true();
    case Op::False: return negated ? f_true() : f_false();
    case Op::Atom: return negated ? f_not(f) : f;
    case Op::Not: return nnf(f->lhs, !negated);
    case Op::And: {
      Formula a = nnf(f->lhs, negated), b = nnf(f->rhs, negated);
      return negated ? f_or(a, b) : f_and(a, b);
    }
    case Op::Or: {
      Formula a = nnf(f->lhs, negated), b = nnf(f->rhs, negated);
      return negated ? f_and(a, b) : f_or(a, b);
    }
    case Op::Implies: {
      // a -> b  ==  !a | b
      Formula a = nnf(f->lhs, !negated), b = nnf(f->rhs, negated);
      return negated ? f_and(a, b) : f_or(a, b);
    }
    case Op::Next: return f_next(nnf(f->lhs, negated));
    case Op::Finally: return negated ? f_globally(nnf(f->lhs, true)) : f_finally(nnf(f->lhs, false));
    case Op::Globally: return negated ? f_finally(nnf(f->lhs, true)) : f_globally(nnf(f->lhs, false));
    case Op::Until: {
      Formula a = nnf(f->lhs, negated), b = nnf(f->rhs, negated);
      return negated ? f_release(a, b) : f_until(a, b);
    }
    case Op::Release: {
      Formula a = nnf(f->lhs, negated), b = nnf(f->rhs, negated);
      return negated ? f_until(a, b) : f_release(a, b);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, false); }

bool is_nnf(const Formula& f) {
  switch (f->op) {
    case Op::True:
    case Op::False:
    case Op::Atom: return true;
    case Op::Not: return f->lhs->op == Op::Atom;
    case Op::Implies: return false;
    default:
      if (f->lhs && !is_nnf(f->lhs)) return false;
      if (f->rhs && !is_nnf(f->rhs)) return false;
      return true;
  }
}

namespace {
bool contains_until_or_finally(const Formula& f) {
  if (f->op == Op::Until || f->op == Op::Finally) return true;
  if (f->lhs && contains_until_or_finally(f->lhs)) return true;
  if (f->rhs && contains_until_or_finally(f->rhs)) return true;
  return false;
}
}  // namespace

bool is_syntactically_safe(const Formula& f) {
  return !contains_until_or_finally(to_nnf(f));
}

std::vector<Formula> relax_vector(const Formula& f) {
  if (f->op != Op::Globally)
    throw NotSafetyShape("soft specification is not of the form G psi: " + to_string(f));
  const Formula& psi = f->lhs;
  if (!is_syntactically_safe(psi))
    throw NotSafetyShape("psi is not syntactically safe in: " + to_string(f));
  return {f, f_finally(f), f_globally(f_finally(psi))};
}

namespace {
void collect(const Formula& f, FormulaSet& out) {
  if (!out.insert(f).second) return;
  if (f->lhs) collect(f->lhs, out);
  if (f->rhs) collect(f->rhs, out);
}
}  // namespace

FormulaSet subformulas(const Formula& f) {
  FormulaSet out;
  collect(f, out);
  return out;
}

int size(const Formula& f) {
  int n = (f->op == Op::Atom || f->op == Op::True || f->op == Op::False) ? 0 : 1;
  if (f->lhs) n += size(f->lhs);
  if (f->rhs) n += size(f->rhs);
  return n;
}

std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  for (const auto& sub : subformulas(f))
    if (sub->op == Op::Atom) out.insert(sub->atom);
  return out;
}

SoftSpec SoftSpec::with_default_chain(const Formula& g_psi) {
  SoftSpec s;
  s.formula = g_psi;
  s.relax_chain = relax_vector(g_psi);
  return s;
}

void SpecProblem::validate() const {
  std::set<std::string> in(inputs.begin(), inputs.end());
  std::set<std::string> out(outputs.begin(), outputs.end());
  for (const auto& o : out)
    if (in.count(o)) throw std::runtime_error("proposition in both inputs and outputs: " + o);
  auto check = [&](const Formula& f, const std::string& where) {
    for (const auto& a : atoms(f))
      if (!in.count(a) && !out.count(a))
        throw std::runtime_error("undeclared proposition '" + a + "' in " + where);
  };
  check(hard, "hard specification");
  for (const auto& s : soft) {
    if (s.relax_chain.empty()) throw std::runtime_error("soft specification with empty relax chain");
    if (!equal(s.relax_chain.front(), s.formula))
      throw std::runtime_error("relax chain does not start with the soft formula");
    for (const auto& g : s.relax_chain) check(g, "soft specification");
  }
}

}  // namespace maxreal::ltl
