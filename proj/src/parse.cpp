#include "deckit/parse.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <set>

#include "deckit/calculus.hpp"
#include "deckit/error.hpp"

namespace deckit {

namespace {

enum class Tok {
  ident,
  lparen,
  rparen,
  lbrack,
  rbrack,
  lbrace,
  rbrace,
  comma,
  pipe,
  dot,
  propdot,
  arrow,
  fatarrow,
  tilde,
  eqeq,
  ltlt,
  star,
  plus,
  equals,
  colon,
  semicolon,
  end,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbrack: return "'['";
    case Tok::rbrack: return "']'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::comma: return "','";
    case Tok::pipe: return "'|'";
    case Tok::dot: return "'.'";
    case Tok::propdot: return "'(.)'";
    case Tok::arrow: return "'->'";
    case Tok::fatarrow: return "'=>'";
    case Tok::tilde: return "'~'";
    case Tok::eqeq: return "'=='";
    case Tok::ltlt: return "'<<'";
    case Tok::star: return "'*'";
    case Tok::plus: return "'+'";
    case Tok::equals: return "'='";
    case Tok::colon: return "':'";
    case Tok::semicolon: return "';'";
    case Tok::end: return "end of input";
  }
  return "token";
}

struct Token {
  Tok kind = Tok::end;
  std::string text;
  int line = 1;
  int col = 1;
};

bool ident_start(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '?';
}
bool ident_char(char c) { return ident_start(c) || c == '\''; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  const Token& peek(std::size_t k = 0) {
    while (buf_.size() <= k) buf_.push_back(scan());
    return buf_[k];
  }

  Token next() {
    peek();
    Token t = std::move(buf_.front());
    buf_.pop_front();
    return t;
  }

  bool at(Tok k, std::size_t ahead = 0) { return peek(ahead).kind == k; }
  bool at_word(std::string_view w, std::size_t ahead = 0) {
    return peek(ahead).kind == Tok::ident && peek(ahead).text == w;
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!at_word(w)) return false;
    next();
    return true;
  }

  Token expect(Tok k) {
    if (!at(k)) fail(peek(), std::string("expected ") + describe(k) + ", found " + found());
    return next();
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) fail(peek(), "expected '" + std::string(w) + "', found " + found());
    next();
  }
  std::string expect_ident(const char* what) {
    if (!at(Tok::ident)) fail(peek(), std::string("expected ") + what + ", found " + found());
    return next().text;
  }

  /// Next whitespace-delimited word, stopping at brackets. Only valid when
  /// nothing has been looked ahead.
  Token raw_word() {
    skip_space();
    Token t;
    t.kind = Tok::ident;
    t.line = line_;
    t.col = col_;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '[' ||
          c == ']')
        break;
      t.text += c;
      advance();
    }
    if (t.text.empty()) fail(t, "expected a rule name");
    return t;
  }

  std::string found() {
    const Token& t = peek();
    if (t.kind == Tok::ident) return "'" + t.text + "'";
    return describe(t.kind);
  }

  [[noreturn]] static void fail(const Token& at, const std::string& msg) {
    throw Error(ErrorKind::syntax_error, "line " + std::to_string(at.line) + ", column " +
                                             std::to_string(at.col) + ": " + msg);
  }

  bool buffered() const { return !buf_.empty(); }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#' || (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/')) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token scan() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) return t;
    auto rest = src_.substr(pos_);
    auto take = [&](Tok k, std::size_t n) {
      t.kind = k;
      t.text = std::string(rest.substr(0, n));
      for (std::size_t i = 0; i < n; ++i) advance();
      return t;
    };
    if (rest.substr(0, 3) == "(.)") return take(Tok::propdot, 3);
    if (rest.substr(0, 2) == "->") return take(Tok::arrow, 2);
    if (rest.substr(0, 2) == "=>") return take(Tok::fatarrow, 2);
    if (rest.substr(0, 2) == "==") return take(Tok::eqeq, 2);
    if (rest.substr(0, 2) == "<<") return take(Tok::ltlt, 2);
    switch (rest[0]) {
      case '(': return take(Tok::lparen, 1);
      case ')': return take(Tok::rparen, 1);
      case '[': return take(Tok::lbrack, 1);
      case ']': return take(Tok::rbrack, 1);
      case '{': return take(Tok::lbrace, 1);
      case '}': return take(Tok::rbrace, 1);
      case ',': return take(Tok::comma, 1);
      case '|': return take(Tok::pipe, 1);
      case '.': return take(Tok::dot, 1);
      case '~': return take(Tok::tilde, 1);
      case '*': return take(Tok::star, 1);
      case '+': return take(Tok::plus, 1);
      case '=': return take(Tok::equals, 1);
      case ':': return take(Tok::colon, 1);
      case ';': return take(Tok::semicolon, 1);
      default: break;
    }
    if (ident_start(rest[0])) {
      std::size_t n = 1;
      while (n < rest.size() && ident_char(rest[n])) ++n;
      return take(Tok::ident, n);
    }
    Lexer::fail(t, std::string("unexpected character '") + rest[0] + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::deque<Token> buf_;
};

constexpr std::array kReserved = {
    "id",     "pr1",       "pr2",    "final",   "in1",      "in2",     "initial", "tag",
    "untag",  "untagall",  "lookup", "update",  "pair",     "lpair",   "rpair",   "copair",
    "lcopair", "rcopair",  "throw",  "try",     "catch",    "catchall", "if",     "seqpair",
    "all",    "theory",    "type",   "exception", "location", "op",    "axiom",   "check",
    "eval",   "expect",    "on",     "state",   "deco",     "logic",   "holds",   "fails",
    "ok",     "exn",       "raise",  "inl",     "inr",      "unit",    "empty",   "strong",
    "weak",   "order",     "rule",   "concl",   "proof",    "term",    "name",
};

// Wraps library errors raised while checking a statement with its line.
template <typename F>
auto at_line(int line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    const std::string msg = e.what();
    if (msg.rfind("line ", 0) == 0) throw;
    throw Error(e.kind(), "line " + std::to_string(line) + ": " + msg);
  }
}

class Parser {
 public:
  Parser(std::string_view text, ParseContext ctx) : lex_(text), ctx_(ctx) {}

  Lexer& lex() { return lex_; }

  void finish() {
    if (!lex_.at(Tok::end)) Lexer::fail(lex_.peek(), "unexpected " + lex_.found());
  }

  // ---- types ----

  Type type() {
    Type t = prod_type();
    while (lex_.accept(Tok::plus)) t = Type::sum(t, prod_type());
    return t;
  }

  Type prod_type() {
    Type t = atom_type();
    while (lex_.accept(Tok::star)) t = Type::prod(t, atom_type());
    return t;
  }

  Type atom_type() {
    if (lex_.accept(Tok::lparen)) {
      Type t = type();
      lex_.expect(Tok::rparen);
      return t;
    }
    Token tok = lex_.peek();
    std::string w = lex_.expect_ident("a type");
    if (w == "1" || w == "unit") return Type::unit();
    if (w == "0" || w == "empty") return Type::empty();
    if (w.rfind("V_", 0) == 0) {
      if (w.size() == 2) Lexer::fail(tok, "missing name after V_");
      return Type::effect(w.substr(2));
    }
    if (w[0] == '?') return Type::meta(w);
    return Type::base(w);
  }

  // ---- terms ----

  Term term() {
    Term head = app();
    if (lex_.accept(Tok::dot)) return Term::comp(head, term());
    if (lex_.accept(Tok::propdot)) return Term::prop_comp(head, term());
    return head;
  }

  std::string bracket_name() {
    lex_.expect(Tok::lbrack);
    std::string n = lex_.expect_ident("a name");
    lex_.expect(Tok::rbrack);
    return n;
  }

  Type bracket_type() {
    lex_.expect(Tok::lbrack);
    Type t = type();
    lex_.expect(Tok::rbrack);
    return t;
  }

  std::pair<Type, Type> bracket_types() {
    lex_.expect(Tok::lbrack);
    Type a = type();
    lex_.expect(Tok::comma);
    Type b = type();
    lex_.expect(Tok::rbrack);
    return {a, b};
  }

  const Theory& sugar_theory(const Token& at) {
    if (!ctx_.theory) Lexer::fail(at, "'" + at.text + "' needs a theory to elaborate");
    return *ctx_.theory;
  }

  Term app() {
    if (lex_.accept(Tok::lparen)) {
      Term t = term();
      lex_.expect(Tok::rparen);
      return t;
    }
    Token tok = lex_.peek();
    if (tok.kind != Tok::ident) Lexer::fail(tok, "expected a term, found " + lex_.found());
    lex_.next();
    const std::string& w = tok.text;

    if (w == "id") return Term::id(bracket_type());
    if (w == "final") return Term::final(bracket_type());
    if (w == "initial") return Term::initial(bracket_type());
    if (w == "pr1" || w == "pr2") {
      auto [a, b] = bracket_types();
      return Term::proj(w == "pr1" ? 1 : 2, a, b);
    }
    if (w == "in1" || w == "in2") {
      auto [a, b] = bracket_types();
      return Term::copr(w == "in1" ? 1 : 2, a, b);
    }
    if (w == "tag") return Term::tag(bracket_name());
    if (w == "untag") return Term::untag(bracket_name());
    if (w == "untagall") return Term::untag_all();
    if (w == "lookup") return Term::lookup(bracket_name());
    if (w == "update") return Term::update(bracket_name());
    if (w == "pair" || w == "lpair" || w == "rpair") return binary(w, false);
    if (w == "copair" || w == "lcopair" || w == "rcopair") return binary(w, true);
    if (w == "throw") {
      const Theory& th = sugar_theory(tok);
      lex_.expect(Tok::lbrack);
      Type t = type();
      lex_.expect(Tok::comma);
      std::string n = lex_.expect_ident("an exception name");
      lex_.expect(Tok::rbrack);
      return at_line(tok.line, [&] { return elaborate_throw(t, n, th); });
    }
    if (w == "if") {
      lex_.expect(Tok::lparen);
      Term b = term();
      lex_.expect(Tok::comma);
      Term f = term();
      lex_.expect(Tok::comma);
      Term g = term();
      lex_.expect(Tok::rparen);
      return elaborate_conditional(b, f, g);
    }
    if (w == "seqpair") {
      const Theory& th = sugar_theory(tok);
      lex_.expect(Tok::lparen);
      Term a1 = term();
      lex_.expect(Tok::comma);
      Term a2 = term();
      lex_.expect(Tok::rparen);
      return at_line(tok.line, [&] { return elaborate_seq_pair(a1, a2, th); });
    }
    if (w == "try") return try_catch(tok);
    if (is_reserved_word(w)) Lexer::fail(tok, "'" + w + "' cannot be used as a term here");
    if (w[0] == '?') return Term::meta(w);
    return Term::constant(w);
  }

  Term binary(const std::string& head, bool co) {
    PairKind k = head[0] == 'l' ? PairKind::left
                 : head[0] == 'r' ? PairKind::right
                                  : PairKind::symmetric;
    lex_.expect(Tok::lparen);
    Term a = term();
    lex_.expect(co ? Tok::pipe : Tok::comma);
    Term b = term();
    lex_.expect(Tok::rparen);
    return co ? Term::copair(k, a, b) : Term::pair(k, a, b);
  }

  Term try_catch(const Token& tok) {
    const Theory& th = sugar_theory(tok);
    TryCatchSpec spec{Term::final(Type::unit()), {}, std::nullopt};
    lex_.expect(Tok::lparen);
    spec.body = term();
    lex_.expect(Tok::rparen);
    if (lex_.accept_word("catch")) {
      lex_.expect(Tok::lparen);
      do {
        Handler h{std::nullopt, Term::final(Type::unit())};
        std::string n = lex_.expect_ident("an exception name or 'all'");
        if (n != "all") h.name = n;
        lex_.expect(Tok::fatarrow);
        h.body = term();
        spec.handlers.push_back(std::move(h));
      } while (lex_.accept(Tok::comma));
      lex_.expect(Tok::rparen);
    }
    if (lex_.accept_word("catchall")) {
      lex_.expect(Tok::lparen);
      spec.catch_all = term();
      lex_.expect(Tok::rparen);
    }
    Term out = at_line(tok.line, [&] { return elaborate_try_catch(spec, th); });
    if (ctx_.try_specs) ctx_.try_specs->push_back(spec);
    return out;
  }

  bool at_relation() {
    return lex_.at(Tok::tilde) || lex_.at(Tok::eqeq) || lex_.at(Tok::ltlt);
  }

  Strength relation() {
    if (lex_.accept(Tok::tilde)) return Strength::weak;
    if (lex_.accept(Tok::eqeq)) return Strength::strong;
    if (lex_.accept(Tok::ltlt)) return Strength::order;
    Lexer::fail(lex_.peek(), "expected '~', '==' or '<<', found " + lex_.found());
  }

  Equation equation() {
    Term l = term();
    Strength s = relation();
    Term r = term();
    return Equation{l, r, s};
  }

  // ---- values ----

  Value value() {
    if (lex_.accept_word("inl")) return Value::inl(value_atom());
    if (lex_.accept_word("inr")) return Value::inr(value_atom());
    if (lex_.accept_word("ok")) return value_atom();
    if (lex_.accept_word("exn")) {
      std::string n = lex_.expect_ident("an exception name");
      return Value::packet(n, value_atom());
    }
    if (lex_.accept_word("raise")) {
      lex_.expect(Tok::lparen);
      std::string n = lex_.expect_ident("an exception name");
      lex_.expect(Tok::comma);
      Value v = value();
      lex_.expect(Tok::rparen);
      return Value::packet(n, v);
    }
    return value_atom();
  }

  Value value_atom() {
    if (lex_.accept(Tok::lparen)) {
      if (lex_.accept(Tok::rparen)) return Value::unit();
      Value a = value();
      if (lex_.accept(Tok::comma)) {
        Value b = value();
        lex_.expect(Tok::rparen);
        return Value::tuple(a, b);
      }
      lex_.expect(Tok::rparen);
      return a;
    }
    Token tok = lex_.peek();
    std::string w = lex_.expect_ident("a value");
    if (w == "inl" || w == "inr" || w == "exn" || w == "ok" || w == "raise")
      Lexer::fail(tok, "parenthesize nested '" + w + "' values");
    return Value::atom(w);
  }

  StateVal state(const Theory& theory) {
    Token open = lex_.expect(Tok::lbrace);
    std::vector<std::optional<Value>> slots(theory.effects.size());
    if (!lex_.at(Tok::rbrace)) {
      do {
        Token loc = lex_.peek();
        std::string n = lex_.expect_ident("a location name");
        if (theory.kind != TheoryKind::states || !theory.find_effect(n))
          throw Error(ErrorKind::undeclared_name, "line " + std::to_string(loc.line) +
                                                      ", column " + std::to_string(loc.col) +
                                                      ": undeclared location '" + n + "'");
        lex_.expect(Tok::equals);
        auto& slot = slots[theory.effect_index(n)];
        if (slot) Lexer::fail(loc, "location '" + n + "' given twice");
        slot = value();
      } while (lex_.accept(Tok::comma));
    }
    lex_.expect(Tok::rbrace);
    StateVal out;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i]) Lexer::fail(open, "state is missing location '" + theory.effects[i].name + "'");
      out.push_back(*slots[i]);
    }
    return out;
  }

  // ---- derivations ----

  Judgment conclusion() {
    lex_.expect(Tok::lparen);
    lex_.expect_word("concl");
    Judgment j = Equation{Term::final(Type::unit()), Term::final(Type::unit()), Strength::strong};
    if (lex_.at_word("term")) {
      lex_.next();
      TermJudgment tj{term(), Type::unit(), Type::unit(), Decoration::pure};
      lex_.expect(Tok::colon);
      tj.source = type();
      lex_.expect(Tok::arrow);
      tj.target = type();
      lex_.expect_word("deco");
      tj.deco = decoration();
      j = tj;
    } else if (lex_.at_word("strong") || lex_.at_word("weak") || lex_.at_word("order")) {
      std::string s = lex_.next().text;
      Term l = term();
      Term r = term();
      j = Equation{l, r,
                   s == "strong" ? Strength::strong
                   : s == "weak" ? Strength::weak
                                 : Strength::order};
    } else {
      j = equation();
    }
    lex_.expect(Tok::rparen);
    return j;
  }

  Decoration decoration() {
    Token tok = lex_.peek();
    std::string d = lex_.expect_ident("a decoration");
    if (d == "0") return Decoration::pure;
    if (d == "1") return Decoration::constructor;
    if (d == "2") return Decoration::modifier;
    Lexer::fail(tok, "decoration must be 0, 1 or 2");
  }

  Instantiation bindings() {
    Instantiation inst;
    if (!lex_.accept(Tok::lbrack)) return inst;
    if (lex_.accept(Tok::rbrack)) return inst;
    do {
      Token kind = lex_.peek();
      std::string k = lex_.expect_ident("'term', 'type' or 'name'");
      Token var = lex_.peek();
      std::string v = lex_.expect_ident("a metavariable");
      if (v[0] != '?') Lexer::fail(var, "metavariables start with '?'");
      lex_.expect(Tok::equals);
      bool fresh = true;
      if (k == "term") {
        fresh = inst.terms.emplace(v, term()).second;
      } else if (k == "type") {
        fresh = inst.types.emplace(v, type()).second;
      } else if (k == "name") {
        fresh = inst.names.emplace(v, lex_.expect_ident("a name")).second;
      } else {
        Lexer::fail(kind, "expected 'term', 'type' or 'name', found '" + k + "'");
      }
      if (!fresh) Lexer::fail(var, "metavariable '" + v + "' bound twice");
    } while (lex_.accept(Tok::semicolon) || lex_.accept(Tok::comma));
    lex_.expect(Tok::rbrack);
    return inst;
  }

  Derivation node() {
    Token open = lex_.expect(Tok::lparen);
    lex_.expect_word("rule");
    std::string rule = lex_.raw_word().text;
    Instantiation inst = bindings();
    Judgment concl = conclusion();
    std::vector<Derivation> premises;
    while (lex_.at(Tok::lparen)) premises.push_back(node());
    lex_.expect(Tok::rparen);
    return Derivation{std::move(rule), std::move(concl), std::move(premises), std::move(inst),
                      open.line};
  }

  NamedDerivation top_node() {
    if (lex_.at(Tok::lparen) && lex_.at_word("proof", 1)) {
      lex_.next();
      lex_.next();
      std::string name = lex_.expect_ident("a proof name");
      Derivation tree = node();
      lex_.expect(Tok::rparen);
      return NamedDerivation{std::move(name), std::move(tree)};
    }
    return NamedDerivation{"", node()};
  }

  // ---- theories ----

  Theory theory(std::vector<TryCatchSpec>* try_specs) {
    Theory th;
    ctx_.theory = &th;
    ctx_.try_specs = try_specs;
    header(th);
    while (!lex_.at(Tok::end)) statement(th);
    return th;
  }

 private:
  void header(Theory& th) {
    lex_.expect_word("theory");
    th.name = lex_.expect_ident("a theory name");
    Token kind = lex_.peek();
    std::string k = lex_.expect_ident("'exceptions', 'states' or 'none'");
    if (k == "exceptions") {
      th.kind = TheoryKind::exceptions;
    } else if (k == "states") {
      th.kind = TheoryKind::states;
    } else if (k == "none") {
      th.kind = TheoryKind::none;
    } else {
      Lexer::fail(kind, "expected 'exceptions', 'states' or 'none', found '" + k + "'");
    }
    lex_.expect_word("logic");
    Token prof = lex_.peek();
    std::string p = lex_.expect_ident("a logic profile");
    auto logic = parse_logic(p);
    if (!logic)
      throw Error(ErrorKind::unknown_profile, "line " + std::to_string(prof.line) + ", column " +
                                                  std::to_string(prof.col) +
                                                  ": unknown logic profile '" + p + "'");
    th.logic = *logic;
    Side side = th.profile().side;
    if ((th.kind == TheoryKind::exceptions && side == Side::comonad) ||
        (th.kind == TheoryKind::states && side == Side::monad))
      Lexer::fail(prof, "logic " + p + " does not fit a theory of " + k);
  }

  void duplicate(const Token& at, const std::string& what, const std::string& name) {
    throw Error(ErrorKind::duplicate_name, "line " + std::to_string(at.line) + ", column " +
                                               std::to_string(at.col) + ": " + what + " '" +
                                               name + "' declared twice");
  }

  std::vector<std::string> atom_list() {
    Token open = lex_.expect(Tok::lbrace);
    std::vector<std::string> atoms;
    if (!lex_.at(Tok::rbrace)) {
      do {
        Token a = lex_.peek();
        std::string n = lex_.expect_ident("an element name");
        if (std::find(atoms.begin(), atoms.end(), n) != atoms.end())
          duplicate(a, "element", n);
        atoms.push_back(n);
      } while (lex_.accept(Tok::comma));
    }
    lex_.expect(Tok::rbrace);
    if (atoms.empty()) Lexer::fail(open, "a carrier needs at least one element");
    return atoms;
  }

  Type checked_type(Theory& th) {
    Token at = lex_.peek();
    Type t = type();
    at_line(at.line, [&] { check_type(t, th); });
    return t;
  }

  void statement(Theory& th) {
    Token kw = lex_.peek();
    std::string w = lex_.expect_ident("a statement keyword");
    if (w == "type") {
      Token n = lex_.peek();
      std::string name = lex_.expect_ident("a type name");
      if (name.rfind("V_", 0) == 0 || name[0] == '?' || name == "1" || name == "0" ||
          is_reserved_word(name))
        Lexer::fail(n, "'" + name + "' cannot name a type");
      if (th.find_base(name)) duplicate(n, "type", name);
      lex_.expect(Tok::equals);
      th.base_types.push_back({name, atom_list()});
    } else if (w == "exception" || w == "location") {
      const bool exc = w == "exception";
      if (th.kind != (exc ? TheoryKind::exceptions : TheoryKind::states))
        Lexer::fail(kw, "'" + w + "' declarations need a theory of " +
                            (exc ? "exceptions" : "states"));
      Token n = lex_.peek();
      std::string name = lex_.expect_ident(exc ? "an exception name" : "a location name");
      if (name[0] == '?') Lexer::fail(n, "'" + name + "' cannot name an effect");
      if (th.find_effect(name)) duplicate(n, w, name);
      lex_.expect_word("of");
      EffectDecl decl{name, {}, std::nullopt};
      if (lex_.at(Tok::lbrace)) {
        decl.atoms = atom_list();
      } else {
        decl.payload = checked_type(th);
      }
      th.effects.push_back(std::move(decl));
    } else if (w == "op") {
      op(th, kw);
    } else if (w == "axiom") {
      Token n = lex_.peek();
      std::string name = lex_.expect_ident("an axiom name");
      if (th.find_axiom(name)) duplicate(n, "axiom", name);
      lex_.expect(Tok::colon);
      Equation eq = equation();
      at_line(kw.line, [&] { require_well_formed(eq, th); });
      th.axioms.push_back({name, eq, kw.line});
    } else if (w == "check") {
      std::string name;
      if (lex_.at(Tok::ident) && lex_.at(Tok::colon, 1)) {
        Token n = lex_.next();
        lex_.next();
        name = n.text;
        for (const auto& c : th.checks)
          if (c.name == name) duplicate(n, "check", name);
      } else {
        name = "check" + std::to_string(th.checks.size() + 1);
      }
      Equation eq = equation();
      lex_.expect_word("expect");
      Token e = lex_.peek();
      std::string ex = lex_.expect_ident("'holds' or 'fails'");
      if (ex != "holds" && ex != "fails")
        Lexer::fail(e, "expected 'holds' or 'fails', found '" + ex + "'");
      at_line(kw.line, [&] { require_well_formed(eq, th); });
      th.checks.push_back({name, eq, ex == "holds", kw.line});
    } else if (w == "eval") {
      Term t = term();
      lex_.expect_word("on");
      EvalStmt st{t, Value::unit(), std::nullopt, kw.line};
      if (th.kind == TheoryKind::states && lex_.at(Tok::lparen) && state_pair_ahead()) {
        lex_.expect(Tok::lparen);
        st.input = value();
        lex_.expect(Tok::comma);
        st.state = state(th);
        lex_.expect(Tok::rparen);
      } else {
        st.input = value();
        if (lex_.accept_word("state")) st.state = state(th);
      }
      at_line(kw.line, [&] { require_well_formed(t, th); });
      th.evals.push_back(std::move(st));
    } else {
      Lexer::fail(kw, "unknown statement '" + w + "'");
    }
  }

  // True when the parenthesized group ahead is `(value, {...})`.
  bool state_pair_ahead() {
    int depth = 0;
    for (std::size_t k = 0;; ++k) {
      const Token& t = lex_.peek(k);
      if (t.kind == Tok::end) return false;
      if (t.kind == Tok::lparen) ++depth;
      if (t.kind == Tok::rparen && --depth == 0) return false;
      if (t.kind == Tok::comma && depth == 1) return lex_.at(Tok::lbrace, k + 1);
    }
  }

  void op(Theory& th, const Token& kw) {
    Token n = lex_.peek();
    OpDecl decl;
    decl.line = kw.line;
    decl.name = lex_.expect_ident("an operation name");
    if (decl.name[0] == '?' || is_reserved_word(decl.name) ||
        std::isdigit(static_cast<unsigned char>(decl.name[0])))
      Lexer::fail(n, "'" + decl.name + "' cannot name an operation");
    if (th.find_op(decl.name)) duplicate(n, "operation", decl.name);
    lex_.expect(Tok::colon);
    decl.source = checked_type(th);
    lex_.expect(Tok::arrow);
    decl.target = checked_type(th);
    lex_.expect_word("deco");
    decl.deco = decoration();
    lex_.expect(Tok::lbrace);
    const bool states = th.kind == TheoryKind::states;
    while (!lex_.at(Tok::rbrace)) {
      OpRow row{Value::unit(), std::nullopt, Value::unit(), std::nullopt};
      if (states && decl.deco != Decoration::pure) {
        lex_.expect(Tok::lparen);
        row.input = value();
        lex_.expect(Tok::comma);
        row.input_state = state(th);
        lex_.expect(Tok::rparen);
      } else {
        row.input = value();
      }
      lex_.expect(Tok::fatarrow);
      if (states && decl.deco == Decoration::modifier) {
        lex_.expect(Tok::lparen);
        row.output = value();
        lex_.expect(Tok::comma);
        row.output_state = state(th);
        lex_.expect(Tok::rparen);
      } else {
        row.output = value();
      }
      decl.rows.push_back(std::move(row));
      if (!lex_.accept(Tok::semicolon) && !lex_.accept(Tok::comma)) break;
    }
    lex_.expect(Tok::rbrace);
    th.ops.push_back(std::move(decl));
  }

  Lexer lex_;
  ParseContext ctx_;
};

}  // namespace

bool is_reserved_word(std::string_view word) {
  return std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end();
}

Type parse_type(std::string_view text) {
  Parser p(text, {});
  Type t = p.type();
  p.finish();
  return t;
}

Term parse_term(std::string_view text, const ParseContext& ctx) {
  Parser p(text, ctx);
  Term t = p.term();
  p.finish();
  return t;
}

Equation parse_equation(std::string_view text, const ParseContext& ctx) {
  Parser p(text, ctx);
  Equation eq = p.equation();
  p.finish();
  return eq;
}

Value parse_value(std::string_view text) {
  Parser p(text, {});
  Value v = p.value();
  p.finish();
  return v;
}

StateVal parse_state(std::string_view text, const Theory& theory) {
  Parser p(text, {});
  StateVal s = p.state(theory);
  p.finish();
  return s;
}

std::string to_string(const StateVal& state, const Theory& theory) {
  std::string out = "{";
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (i) out += ", ";
    out += theory.effects.at(i).name + "=" + to_string(state[i]);
  }
  return out + "}";
}

Theory parse_theory(std::string_view text, std::vector<TryCatchSpec>* try_specs) {
  Parser p(text, {});
  return p.theory(try_specs);
}

std::vector<NamedDerivation> parse_derivations(std::string_view text, const Theory* theory) {
  Parser p(text, ParseContext{theory, nullptr});
  std::vector<NamedDerivation> out;
  while (!p.lex().at(Tok::end)) out.push_back(p.top_node());
  return out;
}

Derivation parse_derivation(std::string_view text, const Theory* theory) {
  auto all = parse_derivations(text, theory);
  if (all.size() != 1)
    throw Error(ErrorKind::syntax_error, "expected exactly one derivation, found " +
                                             std::to_string(all.size()));
  return std::move(all.front().tree);
}

}  // namespace deckit
