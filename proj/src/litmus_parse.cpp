// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include <cctype>
#include <fstream>
#include <sstream>

#include "wmlab/litmus.hpp"

namespace wmlab {

const std::vector<std::string>& known_models() {
  static const std::vector<std::string> models{"imm",  "immsc", "rc11",
                                               "tso",  "armv8", "weakestmo"};
  return models;
}

const Thread& Program::thread(std::uint32_t tid) const {
  if (tid == 0 || tid > threads.size())
    throw PreconditionError("no thread " + std::to_string(tid));
  return threads[tid - 1];
}

std::optional<Loc> Program::find_location(std::string_view n) const {
  for (std::size_t i = 0; i < locations.size(); ++i)
    if (locations[i] == n) return static_cast<Loc>(i);
  return std::nullopt;
}

namespace {

enum class Tok { Ident, Number, Punct, Newline, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      out.push_back({Tok::Newline, "\n", line, col});
      advance(1);
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), line, col});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), line, col});
      advance(j - i);
    } else if (src.substr(i, 3) == "|||") {
      out.push_back({Tok::Punct, "|||", line, col});
      advance(3);
    } else if (src.substr(i, 2) == "&&") {
      out.push_back({Tok::Punct, "&&", line, col});
      advance(2);
    } else if (std::string_view("(),;=+*:").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), line, col});
      advance(1);
    } else {
      throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw{"load",   "store",  "fence",
                                        "exists", "expect", "locations",
                                        "values", "name"};
  return kw.count(s) != 0;
}

struct RawCondition {
  std::optional<std::uint32_t> tid;
  std::string name;
  Value value;
  int line, col;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, Program& p) : toks_(std::move(toks)), p_(p) {}

  void parse() {
    while (true) {
      skip_newlines();
      const Token& t = peek();
      if (t.kind == Tok::End) break;
      if (t.kind == Tok::Punct && t.text == "|||") {
        next();
        if (in_outcomes_) fail(t, "threads must come before outcome clauses");
        if (p_.threads.empty()) p_.threads.emplace_back();
        p_.threads.emplace_back();
        continue;
      }
      if (t.kind != Tok::Ident) fail(t, "expected a statement");
      if (t.text == "name") {
        next();
        p_.name = expect_ident("test name").text;
        end_statement();
      } else if (t.text == "locations") {
        next();
        if (!p_.threads.empty()) fail(t, "locations must be declared first");
        while (peek().kind == Tok::Ident) {
          const Token& n = next();
          if (p_.find_location(n.text)) fail(n, "duplicate location " + n.text);
          p_.locations.push_back(n.text);
        }
        end_statement();
      } else if (t.text == "values") {
        next();
        p_.values.clear();
        while (peek().kind == Tok::Number) p_.values.push_back(number(next()));
        if (p_.values.empty()) fail(peek(), "expected at least one value");
        end_statement();
      } else if (t.text == "exists") {
        next();
        parse_exists(t.line);
      } else if (t.text == "expect") {
        next();
        if (p_.outcomes.empty()) fail(t, "expect without a preceding exists");
        parse_expectations();
        end_statement();
      } else {
        if (in_outcomes_) fail(t, "instructions must come before outcome clauses");
        parse_instruction();
        end_statement();
      }
    }
    resolve_conditions();
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const Token& t, const std::string& msg) {
    throw ParseError(t.line, t.col, msg);
  }
  bool at_punct(const char* s) const {
    return peek().kind == Tok::Punct && peek().text == s;
  }
  void expect_punct(const char* s) {
    if (!at_punct(s)) fail(peek(), std::string("expected '") + s + "'");
    next();
  }
  const Token& expect_ident(const char* what) {
    if (peek().kind != Tok::Ident) fail(peek(), std::string("expected ") + what);
    return next();
  }
  void skip_newlines() {
    while (peek().kind == Tok::Newline) next();
  }
  void end_statement() {
    if (at_punct(";")) next();
    if (peek().kind != Tok::Newline && peek().kind != Tok::End)
      fail(peek(), "expected end of line");
  }
  Value number(const Token& t) {
    try {
      return std::stoll(t.text);
    } catch (const std::exception&) {
      fail(t, "number out of range");
    }
  }

  Thread& current_thread() {
    if (p_.threads.empty()) p_.threads.emplace_back();
    return p_.threads.back();
  }

  Loc location(const Token& t) {
    auto l = p_.find_location(t.text);
    if (!l) fail(t, "undeclared location " + t.text);
    return *l;
  }

  Mode mode(const Token& t, std::initializer_list<Mode> allowed,
            const char* what) {
    auto m = parse_mode(t.text);
    if (!m) fail(t, "unknown mode '" + t.text + "'");
    for (Mode a : allowed)
      if (a == *m) return *m;
    fail(t, std::string("mode ") + t.text + " not allowed for " + what);
  }

  void parse_instruction() {
    const Token& head = next();
    Thread& th = current_thread();
    if (head.text == "store") {
      expect_punct("(");
      Mode m = mode(expect_ident("mode"), {Mode::Rlx, Mode::Rel, Mode::Sc}, "a store");
      expect_punct(",");
      Loc l = location(expect_ident("location"));
      expect_punct(",");
      Expr e = parse_expr(th);
      expect_punct(")");
      th.code.emplace_back(StoreInstr{m, l, std::move(e)});
    } else if (head.text == "fence") {
      expect_punct("(");
      Mode m = mode(expect_ident("mode"),
                    {Mode::Acq, Mode::Rel, Mode::AcqRel, Mode::Sc}, "a fence");
      expect_punct(")");
      th.code.emplace_back(FenceInstr{m});
    } else if (head.kind == Tok::Ident && !is_keyword(head.text)) {
      expect_punct("=");
      if (peek().kind == Tok::Ident && peek().text == "load") {
        next();
        expect_punct("(");
        Mode m = mode(expect_ident("mode"), {Mode::Rlx, Mode::Acq, Mode::Sc}, "a load");
        expect_punct(",");
        Loc l = location(expect_ident("location"));
        expect_punct(")");
        th.code.emplace_back(LoadInstr{m, head.text, l});
      } else {
        Expr e = parse_expr(th);
        th.code.emplace_back(AssignInstr{head.text, std::move(e)});
      }
      th.registers.insert(head.text);
    } else {
      fail(head, "expected an instruction");
    }
  }

  Expr parse_expr(const Thread& th) {
    Expr lhs = parse_term(th);
    while (at_punct("+")) {
      next();
      Expr sum;
      sum.op = Expr::Op::Add;
      sum.args.push_back(std::move(lhs));
      sum.args.push_back(parse_term(th));
      lhs = std::move(sum);
    }
    return lhs;
  }

  Expr parse_term(const Thread& th) {
    Expr lhs = parse_factor(th);
    while (at_punct("*")) {
      next();
      Expr prod;
      prod.op = Expr::Op::Mul;
      prod.args.push_back(std::move(lhs));
      prod.args.push_back(parse_factor(th));
      lhs = std::move(prod);
    }
    return lhs;
  }

  Expr parse_factor(const Thread& th) {
    const Token& t = peek();
    Expr e;
    if (t.kind == Tok::Number) {
      e.op = Expr::Op::Const;
      e.value = number(next());
    } else if (t.kind == Tok::Ident && !is_keyword(t.text)) {
      if (!th.registers.count(t.text))
        fail(t, "register " + t.text + " used before assignment");
      e.op = Expr::Op::Reg;
      e.reg = next().text;
    } else if (at_punct("(")) {
      next();
      e = parse_expr(th);
      expect_punct(")");
    } else {
      fail(t, "expected an expression");
    }
    return e;
  }

  void parse_exists(int line) {
    in_outcomes_ = true;
    std::size_t start = pos_;
    expect_punct("(");
    std::vector<RawCondition> conds;
    while (true) {
      RawCondition c{};
      const Token& first = peek();
      c.line = first.line;
      c.col = first.col;
      if (first.kind == Tok::Number) {
        c.tid = static_cast<std::uint32_t>(number(next()));
        expect_punct(":");
      }
      c.name = expect_ident("register or location").text;
      expect_punct("=");
      if (peek().kind != Tok::Number) fail(peek(), "expected a value");
      c.value = number(next());
      conds.push_back(std::move(c));
      if (at_punct("&&")) {
        next();
        continue;
      }
      break;
    }
    expect_punct(")");
    std::string text;
    for (std::size_t i = start; i < pos_; ++i) {
      const std::string& s = toks_[i].text;
      if (!text.empty() && s != ")" && s != ":" && text.back() != '(' &&
          text.back() != ':')
        text += ' ';
      text += s;
    }
    OutcomeClause clause;
    clause.text = "exists " + text;
    clause.line = line;
    p_.outcomes.push_back(std::move(clause));
    raw_.push_back(std::move(conds));
    parse_expectations();
    end_statement();
  }

  void parse_expectations() {
    while (peek().kind == Tok::Ident) {
      const Token& model = next();
      bool known = false;
      for (const auto& m : known_models()) known |= (m == model.text);
      if (!known) fail(model, "unknown model " + model.text);
      expect_punct(":");
      const Token& v = expect_ident("allow or forbid");
      if (v.text != "allow" && v.text != "forbid")
        fail(v, "expected allow or forbid");
      p_.outcomes.back().expect[model.text] = (v.text == "allow");
    }
  }

  void resolve_conditions() {
    for (std::size_t k = 0; k < raw_.size(); ++k) {
      for (const RawCondition& rc : raw_[k]) {
        Condition c;
        c.value = rc.value;
        if (rc.tid) {
          if (*rc.tid == 0 || *rc.tid > p_.threads.size())
            throw ParseError(rc.line, rc.col, "no thread " + std::to_string(*rc.tid));
          if (!p_.threads[*rc.tid - 1].registers.count(rc.name))
            throw ParseError(rc.line, rc.col,
                             "thread " + std::to_string(*rc.tid) +
                                 " has no register " + rc.name);
          c.tid = *rc.tid;
          c.reg = rc.name;
        } else if (auto l = p_.find_location(rc.name)) {
          c.loc = *l;
        } else {
          std::uint32_t found = 0;
          for (std::uint32_t t = 1; t <= p_.threads.size(); ++t) {
            if (!p_.threads[t - 1].registers.count(rc.name)) continue;
            if (found != 0)
              throw ParseError(rc.line, rc.col,
                               "register " + rc.name +
                                   " is ambiguous; qualify it as <thread>:" +
                                   rc.name);
            found = t;
          }
          if (found == 0)
            throw ParseError(rc.line, rc.col, "unknown register " + rc.name);
          c.tid = found;
          c.reg = rc.name;
        }
        p_.outcomes[k].conds.push_back(std::move(c));
      }
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Program& p_;
  bool in_outcomes_ = false;
  std::vector<std::vector<RawCondition>> raw_;
};

}  // namespace

Program parse_program(std::string_view text, std::string name) {
  Program p;
  p.name = std::move(name);
  Parser(tokenize(text), p).parse();
  return p;
}

Program load_program(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str(), path.stem().string());
}

}  // namespace wmlab
