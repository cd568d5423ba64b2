#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causal/causation.hpp"
#include "causal/model.hpp"

namespace causal {

struct SourceSpan {
  int line = 1, col = 1;
  std::size_t offset = 0, length = 0;
};

struct Diagnostic {
  ErrorCode code = ErrorCode::SyntaxError;
  std::string message;
  SourceSpan span;

  std::string to_string() const {
    return std::to_string(span.line) + ":" + std::to_string(span.col) + ": " + message;
  }
};

struct NamedContext {
  std::string name;
  Context values;
};

struct QuerySpec {
  std::string name;
  Definition definition = Definition::Def2;
  PartialSetting cause;
  Effect effect;
};

struct ModelDocument {
  CausalModel model;
  std::vector<NamedContext> contexts;
  std::vector<QuerySpec> queries;

  const NamedContext* find_context(const std::string& n) const {
    for (const auto& c : contexts)
      if (c.name == n) return &c;
    return nullptr;
  }
  const QuerySpec* find_query(const std::string& n) const {
    for (const auto& q : queries)
      if (q.name == n) return &q;
    return nullptr;
  }
};

struct ParseResult {
  std::optional<ModelDocument> document;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return document.has_value(); }
};

namespace detail {

enum class Tok {
  Ident, KwExo, KwVar, KwContext, KwQuery, KwIf, KwThen, KwElse, KwCase, KwDefault,
  KwDef, KwCause, KwEffect, Int, Tuple, LBrace, RBrace, LParen, RParen, Colon, Comma,
  Semi, Assign, Arrow, Eq, Ne, Not, And, Or, Newline, End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

struct ParseAbort {
  Diagnostic diag;
};

[[noreturn]] inline void abort_parse(ErrorCode code, std::string msg, SourceSpan span) {
  throw ParseAbort{Diagnostic{code, std::move(msg), span}};
}

inline std::optional<Tok> keyword(const std::string& s) {
  static const std::map<std::string, Tok> kws = {
      {"exo", Tok::KwExo},       {"var", Tok::KwVar},     {"context", Tok::KwContext},
      {"query", Tok::KwQuery},   {"if", Tok::KwIf},       {"then", Tok::KwThen},
      {"else", Tok::KwElse},     {"case", Tok::KwCase},   {"default", Tok::KwDefault},
      {"def", Tok::KwDef},       {"cause", Tok::KwCause}, {"effect", Tok::KwEffect},
  };
  auto it = kws.find(s);
  if (it == kws.end()) return std::nullopt;
  return it->second;
}

/// Normalize an integer literal to its canonical decimal form.
inline std::string canonical_int(const std::string& s) {
  long long v = std::stoll(s);
  return std::to_string(v);
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    int depth = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
        continue;
      }
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (c == '\n') {
        if (depth == 0 && !out.empty() && out.back().kind != Tok::Newline)
          out.push_back(make(Tok::Newline, "\n", 1));
        advance_line();
        continue;
      }
      SourceSpan start = here();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          id.push_back(text_[pos_]);
          advance();
        }
        Token t;
        t.kind = keyword(id).value_or(Tok::Ident);
        t.text = id;
        t.span = start;
        t.span.length = id.size();
        out.push_back(t);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '-' && pos_ + 1 < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        out.push_back(scan_int());
        continue;
      }
      if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        advance();
        advance();
        out.push_back(make_at(start, Tok::Arrow, "->", 2));
        continue;
      }
      if (c == '(') {
        if (auto t = try_scan_tuple()) {
          out.push_back(*t);
          continue;
        }
        advance();
        ++depth;
        out.push_back(make_at(start, Tok::LParen, "(", 1));
        continue;
      }
      switch (c) {
        case ')':
          advance();
          if (depth > 0) --depth;
          out.push_back(make_at(start, Tok::RParen, ")", 1));
          continue;
        case '{': advance(); ++depth; out.push_back(make_at(start, Tok::LBrace, "{", 1)); continue;
        case '}':
          advance();
          if (depth > 0) --depth;
          out.push_back(make_at(start, Tok::RBrace, "}", 1));
          continue;
        case ',': advance(); out.push_back(make_at(start, Tok::Comma, ",", 1)); continue;
        case ';': advance(); out.push_back(make_at(start, Tok::Semi, ";", 1)); continue;
        case '&': advance(); out.push_back(make_at(start, Tok::And, "&", 1)); continue;
        case '|': advance(); out.push_back(make_at(start, Tok::Or, "|", 1)); continue;
        case '=': advance(); out.push_back(make_at(start, Tok::Eq, "=", 1)); continue;
        case ':':
          advance();
          if (pos_ < text_.size() && text_[pos_] == '=') {
            advance();
            out.push_back(make_at(start, Tok::Assign, ":=", 2));
          } else {
            out.push_back(make_at(start, Tok::Colon, ":", 1));
          }
          continue;
        case '!':
          advance();
          if (pos_ < text_.size() && text_[pos_] == '=') {
            advance();
            out.push_back(make_at(start, Tok::Ne, "!=", 2));
          } else {
            out.push_back(make_at(start, Tok::Not, "!", 1));
          }
          continue;
        default:
          abort_parse(ErrorCode::SyntaxError,
                      std::string("unexpected character '") + c + "'", start_span(start, 1));
      }
    }
    if (!out.empty() && out.back().kind != Tok::Newline)
      out.push_back(make(Tok::Newline, "\n", 0));
    Token end;
    end.kind = Tok::End;
    end.span = here();
    out.push_back(end);
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  SourceSpan here() const { return SourceSpan{line_, col_, pos_, 0}; }
  static SourceSpan start_span(SourceSpan s, std::size_t len) {
    s.length = len;
    return s;
  }
  void advance() {
    ++pos_;
    ++col_;
  }
  void advance_line() {
    ++pos_;
    ++line_;
    col_ = 1;
  }
  Token make(Tok k, std::string text, std::size_t len) {
    Token t;
    t.kind = k;
    t.text = std::move(text);
    t.span = here();
    t.span.length = len;
    return t;
  }
  static Token make_at(SourceSpan start, Tok k, std::string text, std::size_t len) {
    Token t;
    t.kind = k;
    t.text = std::move(text);
    t.span = start_span(start, len);
    return t;
  }

  Token scan_int() {
    SourceSpan start = here();
    std::string raw;
    if (text_[pos_] == '-') {
      raw.push_back('-');
      advance();
    }
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      raw.push_back(text_[pos_]);
      advance();
    }
    Token t = make_at(start, Tok::Int, canonical_int(raw), pos_ - start.offset);
    return t;
  }

  /// A '(' opens a tuple label only when it is followed by an integer and a
  /// comma; otherwise it is ordinary grouping.
  std::optional<Token> try_scan_tuple() {
    std::size_t p = pos_;
    int line = line_, col = col_;
    SourceSpan start = here();
    auto rollback = [&] {
      pos_ = p;
      line_ = line;
      col_ = col;
    };
    advance();  // '('
    skip_spaces();
    std::vector<std::string> parts;
    std::string first = scan_raw_int();
    if (first.empty()) {
      rollback();
      return std::nullopt;
    }
    skip_spaces();
    if (pos_ >= text_.size() || text_[pos_] != ',') {
      rollback();
      return std::nullopt;
    }
    parts.push_back(canonical_int(first));
    while (pos_ < text_.size() && text_[pos_] == ',') {
      advance();
      skip_spaces();
      std::string next = scan_raw_int();
      if (next.empty())
        abort_parse(ErrorCode::SyntaxError, "malformed tuple label", start_span(start, 1));
      parts.push_back(canonical_int(next));
      skip_spaces();
    }
    if (pos_ >= text_.size() || text_[pos_] != ')')
      abort_parse(ErrorCode::SyntaxError, "malformed tuple label", start_span(start, 1));
    advance();  // ')'
    std::string label = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) label += ",";
      label += parts[i];
    }
    label += ")";
    return make_at(start, Tok::Tuple, label, pos_ - start.offset);
  }

  void skip_spaces() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) advance();
  }
  std::string scan_raw_int() {
    std::string raw;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      raw.push_back('-');
      advance();
    }
    bool digits = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      raw.push_back(text_[pos_]);
      advance();
      digits = true;
    }
    if (!digits) return "";
    return raw;
  }
};

/// Recursive-descent parser over the token stream. Two passes: declarations
/// first so equations and blocks may reference variables in any order.
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParseResult run() {
    ParseResult result;
    try {
      Lexer lex(text_);
      toks_ = lex.run();
      split_statements();
      collect_declarations();
      build();
      result.document = std::move(doc_);
    } catch (const ParseAbort& a) {
      result.diagnostics.push_back(a.diag);
    }
    return result;
  }

 private:
  struct Decl {
    bool exo = false;
    std::string name;
    Range range;
    SourceSpan span;  // of the name
  };

  std::string_view text_;
  std::vector<Token> toks_;
  std::vector<std::pair<std::size_t, std::size_t>> stmts_;  // [begin, end) token ranges
  std::vector<Decl> decls_;
  std::map<std::string, std::size_t> decl_index_;
  std::map<std::string, SourceSpan> equation_span_;
  ModelDocument doc_;
  std::size_t pos_ = 0, stmt_end_ = 0;
  // spans for expression nodes that can carry their own diagnostics
  std::map<const Expr*, SourceSpan> node_span_;
  std::map<const Expr*, SourceSpan> rhs_span_;

  const Token& tok(std::size_t i) const { return toks_[i]; }
  const Token& cur() const { return toks_[std::min(pos_, stmt_end_)]; }
  bool at(Tok k) const { return pos_ < stmt_end_ && toks_[pos_].kind == k; }
  bool done() const { return pos_ >= stmt_end_; }

  Token eat() {
    if (done())
      abort_parse(ErrorCode::SyntaxError, "unexpected end of statement", toks_[stmt_end_].span);
    return toks_[pos_++];
  }
  Token expect(Tok k, const char* what) {
    if (!at(k))
      abort_parse(ErrorCode::SyntaxError, std::string("expected ") + what,
                  done() ? toks_[stmt_end_].span : cur().span);
    return eat();
  }

  void split_statements() {
    std::size_t begin = 0;
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      if (toks_[i].kind == Tok::Newline || toks_[i].kind == Tok::End) {
        if (i > begin) stmts_.push_back({begin, i});
        begin = i + 1;
      }
    }
  }

  SourceSpan stmt_span(std::size_t s) const {
    const auto& [b, e] = stmts_[s];
    SourceSpan sp = toks_[b].span;
    const SourceSpan& last = toks_[e - 1].span;
    sp.length = last.offset + last.length - sp.offset;
    return sp;
  }

  void collect_declarations() {
    for (std::size_t s = 0; s < stmts_.size(); ++s) {
      auto [b, e] = stmts_[s];
      if (toks_[b].kind != Tok::KwExo && toks_[b].kind != Tok::KwVar) continue;
      pos_ = b;
      stmt_end_ = e;
      Decl d;
      d.exo = eat().kind == Tok::KwExo;
      Token name = expect(Tok::Ident, "variable name");
      d.name = name.text;
      d.span = name.span;
      expect(Tok::Colon, "':'");
      expect(Tok::LBrace, "'{'");
      std::vector<std::string> labels;
      while (true) {
        Token lab = eat();
        if (lab.kind != Tok::Int && lab.kind != Tok::Tuple)
          abort_parse(ErrorCode::SyntaxError, "expected range label", lab.span);
        for (const auto& seen : labels)
          if (seen == lab.text)
            abort_parse(ErrorCode::DuplicateName, "duplicate label " + lab.text, lab.span);
        labels.push_back(lab.text);
        if (at(Tok::Comma)) {
          eat();
          continue;
        }
        expect(Tok::RBrace, "',' or '}'");
        break;
      }
      if (!done()) abort_parse(ErrorCode::SyntaxError, "unexpected token", cur().span);
      if (labels.size() < 2)
        abort_parse(ErrorCode::ValueOutOfRange, "range of " + d.name + " needs at least 2 values",
                    stmt_span(s));
      d.range = Range{labels};
      if (decl_index_.count(d.name))
        abort_parse(ErrorCode::DuplicateName, "duplicate declaration of " + d.name, d.span);
      decl_index_[d.name] = decls_.size();
      decls_.push_back(std::move(d));
    }
  }

  const Decl* find_decl(const std::string& name) const {
    auto it = decl_index_.find(name);
    if (it == decl_index_.end()) return nullptr;
    return &decls_[it->second];
  }

  void build() {
    for (const Decl& d : decls_) {
      if (d.exo)
        doc_.model.add_exogenous(d.name, d.range);
      else
        doc_.model.add_endogenous(d.name, d.range);
    }
    for (std::size_t s = 0; s < stmts_.size(); ++s) {
      auto [b, e] = stmts_[s];
      pos_ = b;
      stmt_end_ = e;
      switch (toks_[b].kind) {
        case Tok::KwExo:
        case Tok::KwVar:
          break;  // handled in the declaration pass
        case Tok::Ident:
          parse_equation(s);
          break;
        case Tok::KwContext:
          parse_context();
          break;
        case Tok::KwQuery:
          parse_query();
          break;
        default:
          abort_parse(ErrorCode::SyntaxError,
                      "expected a declaration, equation, context, or query", toks_[b].span);
      }
    }
    for (const Decl& d : decls_)
      if (!d.exo && !equation_span_.count(d.name))
        abort_parse(ErrorCode::MissingEquation, "no equation for " + d.name, d.span);
    try {
      doc_.model.finalize();
    } catch (const ModelError& e) {
      abort_parse(e.code(), e.what(), SourceSpan{1, 1, 0, 0});
    }
    auto rc = doc_.model.check_recursive();
    if (!rc.ok) {
      std::string msg = "cyclic equations:";
      for (VarIndex v : rc.cycle) msg += " " + doc_.model.endogenous(v).name;
      abort_parse(ErrorCode::CyclicModel, msg,
                  equation_span_.at(doc_.model.endogenous(rc.cycle.front()).name));
    }
  }

  void parse_equation(std::size_t s) {
    Token name = eat();
    const Decl* d = find_decl(name.text);
    if (!d)
      abort_parse(ErrorCode::UnknownVariable, "unknown variable " + name.text, name.span);
    if (d->exo)
      abort_parse(ErrorCode::SyntaxError, "cannot write an equation for exogenous " + name.text,
                  name.span);
    if (equation_span_.count(name.text))
      abort_parse(ErrorCode::DuplicateName, "second equation for " + name.text, name.span);
    expect(Tok::Assign, "':='");
    ExprPtr body = parse_expr();
    if (!done()) abort_parse(ErrorCode::SyntaxError, "unexpected token", cur().span);
    precheck_value(*body, d->range, name.text, stmt_span(s));
    equation_span_[name.text] = stmt_span(s);
    doc_.model.set_equation(name.text, body);
  }

  // expression grammar: or-chains of and-chains of unary atoms; comparisons,
  // conditionals and guard chains are atoms
  ExprPtr parse_expr() {
    ExprPtr first = parse_and();
    if (!at(Tok::Or)) return first;
    std::vector<ExprPtr> ks{first};
    while (at(Tok::Or)) {
      eat();
      ks.push_back(parse_and());
    }
    return Expr::bor(std::move(ks));
  }

  ExprPtr parse_and() {
    ExprPtr first = parse_unary();
    if (!at(Tok::And)) return first;
    std::vector<ExprPtr> ks{first};
    while (at(Tok::And)) {
      eat();
      ks.push_back(parse_unary());
    }
    return Expr::band(std::move(ks));
  }

  ExprPtr parse_unary() {
    if (at(Tok::Not)) {
      eat();
      return Expr::bnot(parse_unary());
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    if (done())
      abort_parse(ErrorCode::SyntaxError, "expected an expression", toks_[stmt_end_].span);
    Token t = eat();
    switch (t.kind) {
      case Tok::Int:
      case Tok::Tuple: {
        ExprPtr e = Expr::lit(t.text);
        node_span_[e.get()] = t.span;
        return e;
      }
      case Tok::Ident: {
        if (!find_decl(t.text))
          abort_parse(ErrorCode::UnknownVariable, "unknown variable " + t.text, t.span);
        if (at(Tok::Eq) || at(Tok::Ne)) {
          bool equal = eat().kind == Tok::Eq;
          Token rhs = eat();
          if (rhs.kind == Tok::Ident) {
            if (!find_decl(rhs.text))
              abort_parse(ErrorCode::UnknownVariable, "unknown variable " + rhs.text, rhs.span);
          } else if (rhs.kind != Tok::Int && rhs.kind != Tok::Tuple) {
            abort_parse(ErrorCode::SyntaxError, "expected a value or variable", rhs.span);
          }
          ExprPtr e = Expr::cmp(equal, t.text, rhs.text);
          node_span_[e.get()] = t.span;
          rhs_span_[e.get()] = rhs.span;
          return e;
        }
        ExprPtr e = Expr::var(t.text);
        node_span_[e.get()] = t.span;
        return e;
      }
      case Tok::KwIf: {
        ExprPtr guard = parse_expr();
        expect(Tok::KwThen, "'then'");
        ExprPtr yes = parse_expr();
        expect(Tok::KwElse, "'else'");
        ExprPtr no = parse_expr();
        ExprPtr e = Expr::ite(guard, yes, no);
        node_span_[e.get()] = t.span;
        return e;
      }
      case Tok::KwCase: {
        std::vector<ExprPtr> ks;
        while (true) {
          if (at(Tok::KwDefault)) {
            eat();
            expect(Tok::Arrow, "'->'");
            ks.push_back(parse_expr());
            break;
          }
          ExprPtr guard = parse_expr();
          expect(Tok::Arrow, "'->'");
          ExprPtr branch = parse_expr();
          ks.push_back(guard);
          ks.push_back(branch);
          expect(Tok::Semi, "';'");
        }
        ExprPtr e = Expr::cases(std::move(ks));
        node_span_[e.get()] = t.span;
        return e;
      }
      case Tok::LParen: {
        ExprPtr e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        abort_parse(ErrorCode::SyntaxError, "expected an expression", t.span);
    }
  }

  SourceSpan span_of(const Expr& e, SourceSpan fallback) const {
    auto it = node_span_.find(&e);
    return it == node_span_.end() ? fallback : it->second;
  }

  // typecheck with source spans, mirroring the model's own equation checks
  void precheck_value(const Expr& e, const Range& target, const std::string& tname,
                      SourceSpan stmt) {
    switch (e.kind) {
      case ExprKind::Lit:
        if (!target.index_of(e.name))
          abort_parse(ErrorCode::ValueOutOfRange,
                      "value " + e.name + " not in range of " + tname, span_of(e, stmt));
        return;
      case ExprKind::Var:
        return;  // partial label overlap is checked lazily by the model
      case ExprKind::If:
        precheck_bool(*e.kids[0], tname, stmt);
        precheck_value(*e.kids[1], target, tname, stmt);
        precheck_value(*e.kids[2], target, tname, stmt);
        return;
      case ExprKind::Case:
        for (std::size_t i = 0; i + 1 < e.kids.size(); i += 2) {
          precheck_bool(*e.kids[i], tname, stmt);
          precheck_value(*e.kids[i + 1], target, tname, stmt);
        }
        precheck_value(*e.kids.back(), target, tname, stmt);
        return;
      case ExprKind::Eq:
      case ExprKind::Ne:
      case ExprKind::Not:
      case ExprKind::And:
      case ExprKind::Or:
        if (!target.index_of("0") || !target.index_of("1"))
          abort_parse(ErrorCode::ValueOutOfRange,
                      "boolean equation for " + tname + " needs labels 0 and 1", stmt);
        precheck_bool(e, tname, stmt);
        return;
      case ExprKind::Table:
        return;  // never produced by this parser
    }
  }

  void precheck_bool(const Expr& e, const std::string& tname, SourceSpan stmt) {
    switch (e.kind) {
      case ExprKind::Var: {
        const Decl* d = find_decl(e.name);
        if (d && !d->range.is_boolean())
          abort_parse(ErrorCode::ValueOutOfRange,
                      e.name + " used as boolean but its range is not {0,1}", span_of(e, stmt));
        return;
      }
      case ExprKind::Eq:
      case ExprKind::Ne: {
        const Decl* lhs = find_decl(e.kids[0]->name);
        if (!lhs) return;  // unreachable: checked at parse
        if (find_decl(e.rhs_label)) return;  // variable-variable comparison
        if (!lhs->range.index_of(e.rhs_label)) {
          auto it = rhs_span_.find(&e);
          abort_parse(ErrorCode::ValueOutOfRange,
                      "value " + e.rhs_label + " not in range of " + e.kids[0]->name,
                      it == rhs_span_.end() ? stmt : it->second);
        }
        return;
      }
      case ExprKind::Not:
        precheck_bool(*e.kids[0], tname, stmt);
        return;
      case ExprKind::And:
      case ExprKind::Or:
        for (const auto& k : e.kids) precheck_bool(*k, tname, stmt);
        return;
      default:
        abort_parse(ErrorCode::SyntaxError, "value expression used as a condition",
                    span_of(e, stmt));
    }
  }

  void parse_context() {
    eat();  // 'context'
    Token name = expect(Tok::Ident, "context name");
    if (doc_.find_context(name.text))
      abort_parse(ErrorCode::DuplicateName, "duplicate context " + name.text, name.span);
    expect(Tok::LBrace, "'{'");
    std::vector<std::optional<Value>> values(doc_.model.num_exogenous());
    if (!at(Tok::RBrace)) {
      while (true) {
        Token var = expect(Tok::Ident, "exogenous variable");
        const Decl* d = find_decl(var.text);
        if (!d) abort_parse(ErrorCode::UnknownVariable, "unknown variable " + var.text, var.span);
        if (!d->exo)
          abort_parse(ErrorCode::UnknownVariable, var.text + " is not exogenous", var.span);
        expect(Tok::Eq, "'='");
        Token val = eat();
        if (val.kind != Tok::Int && val.kind != Tok::Tuple)
          abort_parse(ErrorCode::SyntaxError, "expected a value", val.span);
        auto idx = d->range.index_of(val.text);
        if (!idx)
          abort_parse(ErrorCode::ValueOutOfRange,
                      "value " + val.text + " not in range of " + var.text, val.span);
        ExoIndex u = doc_.model.exo_index(var.text);
        if (values[u])
          abort_parse(ErrorCode::DuplicateName, var.text + " set twice", var.span);
        values[u] = *idx;
        if (at(Tok::Comma)) {
          eat();
          continue;
        }
        break;
      }
    }
    expect(Tok::RBrace, "'}'");
    if (!done()) abort_parse(ErrorCode::SyntaxError, "unexpected token", cur().span);
    NamedContext c;
    c.name = name.text;
    for (int u = 0; u < doc_.model.num_exogenous(); ++u) {
      if (!values[u])
        abort_parse(ErrorCode::SyntaxError,
                    "context " + c.name + " missing a value for " + doc_.model.exogenous(u).name,
                    name.span);
      c.values.push_back(*values[u]);
    }
    doc_.contexts.push_back(std::move(c));
  }

  std::pair<VarIndex, Value> parse_endo_assignment(const char* what) {
    Token var = expect(Tok::Ident, what);
    const Decl* d = find_decl(var.text);
    if (!d) abort_parse(ErrorCode::UnknownVariable, "unknown variable " + var.text, var.span);
    if (d->exo)
      abort_parse(ErrorCode::UnknownVariable, var.text + " is exogenous; use an endogenous variable",
                  var.span);
    expect(Tok::Eq, "'='");
    Token val = eat();
    if (val.kind != Tok::Int && val.kind != Tok::Tuple)
      abort_parse(ErrorCode::SyntaxError, "expected a value", val.span);
    auto idx = d->range.index_of(val.text);
    if (!idx)
      abort_parse(ErrorCode::ValueOutOfRange, "value " + val.text + " not in range of " + var.text,
                  val.span);
    return {doc_.model.endo_index(var.text), *idx};
  }

  void parse_query() {
    eat();  // 'query'
    Token name = expect(Tok::Ident, "query name");
    if (doc_.find_query(name.text))
      abort_parse(ErrorCode::DuplicateName, "duplicate query " + name.text, name.span);
    expect(Tok::LBrace, "'{'");
    QuerySpec q;
    q.name = name.text;

    expect(Tok::KwDef, "'def'");
    expect(Tok::Eq, "'='");
    Token defname = expect(Tok::Ident, "definition name");
    auto def = parse_definition(defname.text);
    if (!def)
      abort_parse(ErrorCode::SyntaxError, "unknown definition " + defname.text, defname.span);
    q.definition = *def;
    expect(Tok::Semi, "';'");

    expect(Tok::KwCause, "'cause'");
    expect(Tok::Eq, "'='");
    while (true) {
      Token ahead = cur();
      auto [v, val] = parse_endo_assignment("cause variable");
      if (q.cause.contains(v))
        abort_parse(ErrorCode::DuplicateName,
                    "cause sets " + doc_.model.endogenous(v).name + " twice", ahead.span);
      q.cause.set(v, val);
      if (at(Tok::And)) {
        eat();
        continue;
      }
      break;
    }
    expect(Tok::Semi, "';'");

    expect(Tok::KwEffect, "'effect'");
    expect(Tok::Eq, "'='");
    q.effect.variable = -1;
    while (true) {
      Token ahead = cur();
      auto [v, val] = parse_endo_assignment("effect variable");
      if (q.effect.variable == -1) {
        q.effect.variable = v;
      } else if (q.effect.variable != v) {
        abort_parse(ErrorCode::MalformedFormula,
                    "effect disjunction must stay on one variable", ahead.span);
      }
      q.effect.accepted.push_back(val);
      if (at(Tok::Or)) {
        eat();
        continue;
      }
      break;
    }
    expect(Tok::RBrace, "'}'");
    if (!done()) abort_parse(ErrorCode::SyntaxError, "unexpected token", cur().span);
    std::sort(q.effect.accepted.begin(), q.effect.accepted.end());
    q.effect.accepted.erase(std::unique(q.effect.accepted.begin(), q.effect.accepted.end()),
                            q.effect.accepted.end());
    doc_.queries.push_back(std::move(q));
  }
};

}  // namespace detail

inline ParseResult parse_document(std::string_view text) {
  detail::Parser p(text);
  return p.run();
}

/// Convenience for callers that prefer exceptions: first diagnostic becomes a
/// ModelError with a "line:col: message" text.
inline ModelDocument parse_document_or_throw(std::string_view text) {
  ParseResult r = parse_document(text);
  if (!r.ok()) {
    const Diagnostic& d = r.diagnostics.front();
    throw ModelError(d.code, d.to_string());
  }
  return std::move(*r.document);
}

namespace detail {

inline std::string serialize_range(const Range& r) {
  std::string out = "{";
  for (int i = 0; i < r.size(); ++i) {
    if (i) out += ",";
    out += r.label(i);
  }
  out += "}";
  return out;
}

/// prec: 0 = bare, 1 = or-operand, 2 = and/not-operand.
inline std::string serialize_expr(const CausalModel& m, const Expr& e, int prec,
                                  const Range* target) {
  auto wrap = [&](std::string s, bool cond) {
    return cond ? "(" + std::move(s) + ")" : std::move(s);
  };
  switch (e.kind) {
    case ExprKind::Lit:
      return e.name;
    case ExprKind::Var:
      return e.name;
    case ExprKind::Eq:
    case ExprKind::Ne:
      return wrap(e.kids[0]->name + (e.kind == ExprKind::Eq ? "=" : "!=") + e.rhs_label,
                  prec >= 2);
    case ExprKind::Not:
      return "!" + wrap(serialize_expr(m, *e.kids[0], 2, target),
                        e.kids[0]->kind != ExprKind::Var);
    case ExprKind::And: {
      std::string s;
      for (std::size_t i = 0; i < e.kids.size(); ++i) {
        if (i) s += " & ";
        s += serialize_expr(m, *e.kids[i], 2, target);
      }
      return wrap(std::move(s), prec >= 2);
    }
    case ExprKind::Or: {
      std::string s;
      for (std::size_t i = 0; i < e.kids.size(); ++i) {
        if (i) s += " | ";
        s += serialize_expr(m, *e.kids[i], 1, target);
      }
      return wrap(std::move(s), prec >= 1);
    }
    case ExprKind::If:
      return wrap("if " + serialize_expr(m, *e.kids[0], 0, target) + " then " +
                      serialize_expr(m, *e.kids[1], 0, target) + " else " +
                      serialize_expr(m, *e.kids[2], 0, target),
                  prec > 0);
    case ExprKind::Case: {
      std::string s = "case ";
      for (std::size_t i = 0; i + 1 < e.kids.size(); i += 2) {
        s += serialize_expr(m, *e.kids[i], 0, target) + " -> " +
             serialize_expr(m, *e.kids[i + 1], 0, target) + "; ";
      }
      s += "default -> " + serialize_expr(m, *e.kids.back(), 0, target);
      return wrap(std::move(s), prec > 0);
    }
    case ExprKind::Table: {
      // rendered as an equivalent guard chain; needs finalize annotations
      if (!target || e.table_vars.size() != e.table_refs.size())
        throw ModelError(ErrorCode::MalformedFormula, "cannot serialize unfinalized table");
      auto label_of = [&](std::size_t i, Value v) -> const std::string& {
        const VarRef& r = e.table_vars[i];
        return r.kind == VarKind::Endogenous ? m.range(r.index).label(v)
                                             : m.exo_range(r.index).label(v);
      };
      std::vector<std::string> rows;
      std::vector<Value> vals;
      for_each_assignment(e.table_sizes, [&](const std::vector<Value>& d) {
        std::string guard;
        long long idx = 0;  // row-major, first ref most significant (matches eval)
        for (std::size_t i = 0; i < e.table_refs.size(); ++i) {
          if (i) guard += " & ";
          guard += e.table_refs[i] + "=" + label_of(i, d[i]);
          idx = idx * e.table_sizes[i] + d[i];
        }
        rows.push_back(std::move(guard));
        vals.push_back(e.table_values[idx]);
        return true;
      });
      if (rows.empty() || e.table_refs.empty()) {
        Value v = e.table_values.empty() ? 0 : e.table_values[0];
        return target->label(v);
      }
      std::string s = "case ";
      for (std::size_t r = 0; r + 1 < rows.size(); ++r)
        s += rows[r] + " -> " + target->label(vals[r]) + "; ";
      s += "default -> " + target->label(vals.back());
      return wrap(std::move(s), prec > 0);
    }
  }
  return "";
}

}  // namespace detail

/// Canonical text of declarations and equations only (the model-identity
/// surface: this is what the model hash covers).
inline std::string serialize_model(const CausalModel& m) {
  std::string out;
  for (int u = 0; u < m.num_exogenous(); ++u)
    out += "exo " + m.exogenous(u).name + " : " + detail::serialize_range(m.exo_range(u)) + "\n";
  for (int v = 0; v < m.num_endogenous(); ++v)
    out += "var " + m.endogenous(v).name + " : " + detail::serialize_range(m.range(v)) + "\n";
  for (int v = 0; v < m.num_endogenous(); ++v)
    out += m.endogenous(v).name + " := " +
           detail::serialize_expr(m, *m.equation(v), 0, &m.range(v)) + "\n";
  return out;
}

inline std::string serialize_document(const ModelDocument& doc) {
  std::string out = serialize_model(doc.model);
  const CausalModel& m = doc.model;
  for (const auto& c : doc.contexts) {
    out += "context " + c.name + " { ";
    for (int u = 0; u < m.num_exogenous(); ++u) {
      if (u) out += ", ";
      out += m.exogenous(u).name + "=" + m.exo_range(u).label(c.values[u]);
    }
    out += " }\n";
  }
  for (const auto& q : doc.queries) {
    out += "query " + q.name + " { def=" + definition_name(q.definition) + "; cause = ";
    bool first = true;
    for (const auto& [v, val] : q.cause.items()) {
      if (!first) out += " & ";
      first = false;
      out += m.endogenous(v).name + "=" + m.range(v).label(val);
    }
    out += "; effect = ";
    first = true;
    for (Value val : q.effect.accepted) {
      if (!first) out += " | ";
      first = false;
      out += m.endogenous(q.effect.variable).name + "=" +
             m.range(q.effect.variable).label(val);
    }
    out += " }\n";
  }
  return out;
}

// -- structural equality (surface fields only) --------------------------------

inline bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.rhs_label != b.rhs_label) return false;
  if (a.table_refs != b.table_refs || a.table_values != b.table_values) return false;
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!expr_equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

inline bool model_equal(const CausalModel& a, const CausalModel& b) {
  if (a.num_exogenous() != b.num_exogenous() || a.num_endogenous() != b.num_endogenous())
    return false;
  for (int u = 0; u < a.num_exogenous(); ++u)
    if (a.exogenous(u).name != b.exogenous(u).name ||
        a.exo_range(u).labels != b.exo_range(u).labels)
      return false;
  for (int v = 0; v < a.num_endogenous(); ++v)
    if (a.endogenous(v).name != b.endogenous(v).name || a.range(v).labels != b.range(v).labels)
      return false;
  for (int v = 0; v < a.num_endogenous(); ++v)
    if (!expr_equal(*a.equation(v), *b.equation(v))) return false;
  return true;
}

inline bool document_equal(const ModelDocument& a, const ModelDocument& b) {
  if (!model_equal(a.model, b.model)) return false;
  if (a.contexts.size() != b.contexts.size() || a.queries.size() != b.queries.size())
    return false;
  for (std::size_t i = 0; i < a.contexts.size(); ++i)
    if (a.contexts[i].name != b.contexts[i].name || a.contexts[i].values != b.contexts[i].values)
      return false;
  for (std::size_t i = 0; i < a.queries.size(); ++i) {
    const auto& x = a.queries[i];
    const auto& y = b.queries[i];
    if (x.name != y.name || x.definition != y.definition || !(x.cause == y.cause) ||
        x.effect.variable != y.effect.variable || x.effect.accepted != y.effect.accepted)
      return false;
  }
  return true;
}

// -- model identity hash -------------------------------------------------------

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t model_hash(const CausalModel& m) { return fnv1a64(serialize_model(m)); }

}  // namespace causal
