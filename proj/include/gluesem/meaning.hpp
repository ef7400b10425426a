#pragma once

// Meaning language: simple types, lambda terms (de Bruijn internally),
// parsing/printing, beta-eta normalization and type inference.

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gluesem {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
  ParseError(const std::string& msg, size_t pos)
      : Error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
  size_t position;
};

struct TypeError : Error {
  explicit TypeError(const std::string& msg) : Error(msg) {}
};

// ---------------------------------------------------------------------------
// Types: base e (entities), base t (propositions), arrows.

class Type {
 public:
  Type() = default;  // null handle

  static Type base_e() { return Type(std::make_shared<Node>(Node{'e', {}, {}})); }
  static Type base_t() { return Type(std::make_shared<Node>(Node{'t', {}, {}})); }
  static Type arrow(Type dom, Type cod) {
    return Type(std::make_shared<Node>(Node{0, std::move(dom), std::move(cod)}));
  }

  bool defined() const { return node_ != nullptr; }
  bool is_base() const { return node_ && node_->base != 0; }
  bool is_arrow() const { return node_ && node_->base == 0; }
  char base_name() const { return node_->base; }
  const Type& dom() const { return node_->dom; }
  const Type& cod() const { return node_->cod; }

  friend bool operator==(const Type& a, const Type& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    if (a.node_->base != b.node_->base) return false;
    if (a.is_base()) return true;
    return a.dom() == b.dom() && a.cod() == b.cod();
  }
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

  std::string str() const {
    if (!defined()) return "?";
    if (is_base()) return std::string(1, base_name());
    std::string d = dom().is_arrow() ? "(" + dom().str() + ")" : dom().str();
    return d + "->" + cod().str();
  }

  // (e->t)->(e->t)->t, the shape shared by generalized quantifiers.
  bool is_quantifier() const {
    static const Type q = quantifier();
    return *this == q;
  }
  static Type quantifier() {
    Type et = arrow(base_e(), base_t());
    return arrow(et, arrow(et, base_t()));
  }

 private:
  struct Node {
    char base;  // 'e' or 't'; 0 for arrow
    Type dom, cod;
  };
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

inline Type parse_type(const std::string& text, size_t* pos_io = nullptr) {
  size_t local = 0;
  size_t& pos = pos_io ? *pos_io : local;
  auto skip = [&] { while (pos < text.size() && isspace((unsigned char)text[pos])) pos++; };
  // Atom ::= 'e' | 't' | '(' Type ')'   Type ::= Atom ['->' Type]
  std::function<Type()> parse_full = [&]() -> Type {
    std::function<Type()> parse_atom = [&]() -> Type {
      skip();
      if (pos >= text.size()) throw ParseError("expected type", pos);
      if (text[pos] == '(') {
        pos++;
        Type inner = parse_full();
        skip();
        if (pos >= text.size() || text[pos] != ')') throw ParseError("expected ')'", pos);
        pos++;
        return inner;
      }
      char c = text[pos];
      if (c == 'e') { pos++; return Type::base_e(); }
      if (c == 't') { pos++; return Type::base_t(); }
      throw ParseError(std::string("unknown base type '") + c + "'", pos);
    };
    Type left = parse_atom();
    skip();
    if (pos + 1 < text.size() && text[pos] == '-' && text[pos + 1] == '>') {
      pos += 2;
      return Type::arrow(left, parse_full());
    }
    return left;
  };
  Type ty = parse_full();
  if (!pos_io) {
    skip();
    if (pos != text.size()) throw ParseError("trailing characters after type", pos);
  }
  return ty;
}

// ---------------------------------------------------------------------------
// Terms. Lambda-bound variables are de Bruijn indices; glue-language
// variables (existential X, R, S, ... and eigenvariables x, c, ...) live in a
// VarPool and are referenced by id, so alpha equality is plain structural
// equality.

enum class TermKind { Const, Bound, Lam, App, Var };
enum class VarKind { Existential, Eigen };

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  TermKind kind;
  // Const
  std::string name;
  Type ctype;
  // Bound
  int index = -1;
  // Lam
  std::string hint;
  Type binder;  // may be null until inference fills it
  Term body;
  // App
  Term fun, arg;
  // Var
  int var = -1;
};

inline Term mk_const(std::string name, Type ty) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Const;
  n->name = std::move(name);
  n->ctype = std::move(ty);
  return n;
}
inline Term mk_bound(int index) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Bound;
  n->index = index;
  return n;
}
inline Term mk_lam(std::string hint, Type binder, Term body) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Lam;
  n->hint = std::move(hint);
  n->binder = std::move(binder);
  n->body = std::move(body);
  return n;
}
inline Term mk_app(Term fun, Term arg) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::App;
  n->fun = std::move(fun);
  n->arg = std::move(arg);
  return n;
}
inline Term mk_var(int id) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Var;
  n->var = id;
  return n;
}

struct VarInfo {
  std::string name;
  VarKind kind;
  Type type;  // may be null until inference resolves it
  int birth;  // scope timestamp; a var's value may only mention eigens born earlier
};

class VarPool {
 public:
  int fresh(std::string name, VarKind kind, Type type = {}) {
    int birth = clock_++;
    vars_.push_back(VarInfo{std::move(name), kind, std::move(type), birth});
    return (int)vars_.size() - 1;
  }
  // Raised variables inherit the scope of the variable they stand in for.
  int fresh_at(std::string name, VarKind kind, Type type, int birth) {
    vars_.push_back(VarInfo{std::move(name), kind, std::move(type), birth});
    return (int)vars_.size() - 1;
  }
  const VarInfo& info(int id) const { return vars_.at(id); }
  void set_type(int id, Type ty) { vars_.at(id).type = std::move(ty); }
  int size() const { return (int)vars_.size(); }
  std::string display(int id) const { return vars_.at(id).name + std::to_string(id); }

 private:
  std::vector<VarInfo> vars_;
  int clock_ = 0;
};

// ---------------------------------------------------------------------------
// Signature: the typed constants the lexicon declares.

class Signature {
 public:
  void declare(const std::string& name, Type ty) {
    auto it = consts_.find(name);
    if (it != consts_.end()) {
      if (it->second != ty) throw Error("constant '" + name + "' redeclared with a different type");
      return;
    }
    consts_.emplace(name, std::move(ty));
  }
  const Type* lookup(const std::string& name) const {
    auto it = consts_.find(name);
    return it == consts_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, Type> consts_;
};

// ---------------------------------------------------------------------------
// de Bruijn plumbing.

inline Term shift_term(const Term& t, int delta, int cutoff = 0) {
  switch (t->kind) {
    case TermKind::Const:
    case TermKind::Var:
      return t;
    case TermKind::Bound:
      return t->index >= cutoff ? mk_bound(t->index + delta) : t;
    case TermKind::Lam: {
      Term b = shift_term(t->body, delta, cutoff + 1);
      return b == t->body ? t : mk_lam(t->hint, t->binder, b);
    }
    case TermKind::App: {
      Term f = shift_term(t->fun, delta, cutoff);
      Term a = shift_term(t->arg, delta, cutoff);
      return (f == t->fun && a == t->arg) ? t : mk_app(f, a);
    }
  }
  return t;
}

// body[level := value], adjusting indices for the removed binder.
inline Term subst_bound(const Term& t, int level, const Term& value) {
  switch (t->kind) {
    case TermKind::Const:
    case TermKind::Var:
      return t;
    case TermKind::Bound:
      if (t->index == level) return shift_term(value, level);
      return t->index > level ? mk_bound(t->index - 1) : t;
    case TermKind::Lam:
      return mk_lam(t->hint, t->binder, subst_bound(t->body, level + 1, value));
    case TermKind::App:
      return mk_app(subst_bound(t->fun, level, value), subst_bound(t->arg, level, value));
  }
  return t;
}

inline bool bound_occurs(const Term& t, int level) {
  switch (t->kind) {
    case TermKind::Const:
    case TermKind::Var:
      return false;
    case TermKind::Bound:
      return t->index == level;
    case TermKind::Lam:
      return bound_occurs(t->body, level + 1);
    case TermKind::App:
      return bound_occurs(t->fun, level) || bound_occurs(t->arg, level);
  }
  return false;
}

// Normal-order reduction to beta-eta normal form. Terminates on well-typed
// input (simply typed).
inline Term normalize(const Term& t) {
  switch (t->kind) {
    case TermKind::Const:
    case TermKind::Bound:
    case TermKind::Var:
      return t;
    case TermKind::Lam: {
      Term body = normalize(t->body);
      // eta: lam x. f x  ->  f   when x not free in f
      if (body->kind == TermKind::App && body->arg->kind == TermKind::Bound &&
          body->arg->index == 0 && !bound_occurs(body->fun, 0)) {
        return shift_term(body->fun, -1);
      }
      return mk_lam(t->hint, t->binder, body);
    }
    case TermKind::App: {
      Term fun = normalize(t->fun);
      if (fun->kind == TermKind::Lam) return normalize(subst_bound(fun->body, 0, t->arg));
      return mk_app(fun, normalize(t->arg));
    }
  }
  return t;
}

// Equality up to bound-variable naming; binder annotations and name hints are
// ignored (de Bruijn makes this structural).
inline bool alpha_equal(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Const:
      return a->name == b->name;
    case TermKind::Bound:
      return a->index == b->index;
    case TermKind::Var:
      return a->var == b->var;
    case TermKind::Lam:
      return alpha_equal(a->body, b->body);
    case TermKind::App:
      return alpha_equal(a->fun, b->fun) && alpha_equal(a->arg, b->arg);
  }
  return false;
}

inline bool var_occurs(const Term& t, int id) {
  switch (t->kind) {
    case TermKind::Const:
    case TermKind::Bound:
      return false;
    case TermKind::Var:
      return t->var == id;
    case TermKind::Lam:
      return var_occurs(t->body, id);
    case TermKind::App:
      return var_occurs(t->fun, id) || var_occurs(t->arg, id);
  }
  return false;
}

inline void collect_vars(const Term& t, std::vector<int>& out) {
  switch (t->kind) {
    case TermKind::Const:
    case TermKind::Bound:
      return;
    case TermKind::Var:
      out.push_back(t->var);
      return;
    case TermKind::Lam:
      collect_vars(t->body, out);
      return;
    case TermKind::App:
      collect_vars(t->fun, out);
      collect_vars(t->arg, out);
      return;
  }
}

// ---------------------------------------------------------------------------
// Concrete syntax.
//
//   Term ::= Ident | Ident '(' Term {',' Term} ')' | 'lam' Ident '.' Term
//          | '(' Term ')' { '(' Term {',' Term} ')' }
//
// 'λ' (UTF-8) is accepted for 'lam'. Q(z, P, S) sugars to Q (lam z.P)
// (lam z.S) when Q is a constant of quantifier type. Unbound capitalized
// identifiers parse as existential glue variables; other unbound identifiers
// must be declared constants.

namespace detail {

struct Lexer {
  const std::string& s;
  size_t pos = 0;

  explicit Lexer(const std::string& text) : s(text) {}

  void skip() {
    while (pos < s.size() && isspace((unsigned char)s[pos])) pos++;
  }
  bool eof() {
    skip();
    return pos >= s.size();
  }
  char peek() {
    skip();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool try_punct(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      pos++;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!try_punct(c)) throw ParseError(std::string("expected '") + c + "'", pos);
  }
  // lambda is either the keyword "lam" or a UTF-8 λ (0xCE 0xBB)
  bool try_lambda() {
    skip();
    if (pos + 1 < s.size() && (unsigned char)s[pos] == 0xCE && (unsigned char)s[pos + 1] == 0xBB) {
      pos += 2;
      return true;
    }
    size_t save = pos;
    std::string id = try_ident();
    if (id == "lam") return true;
    pos = save;
    return false;
  }
  static bool ident_start(char c) { return isalpha((unsigned char)c) || c == '_'; }
  static bool ident_char(char c) { return isalnum((unsigned char)c) || c == '_'; }
  std::string try_ident() {
    skip();
    if (pos >= s.size() || !ident_start(s[pos])) return "";
    size_t start = pos;
    while (pos < s.size() && ident_char(s[pos])) pos++;
    return s.substr(start, pos - start);
  }
  std::string expect_ident(const char* what) {
    std::string id = try_ident();
    if (id.empty()) throw ParseError(std::string("expected ") + what, pos);
    return id;
  }
};

class MeaningParser {
 public:
  MeaningParser(Lexer& lx, const Signature& sig, VarPool& pool,
                const std::map<std::string, int>& bound)
      : lx_(lx), sig_(sig), pool_(pool), outer_(bound) {}

  Term parse() {
    Term t = parse_term();
    return t;
  }

 private:
  Lexer& lx_;
  const Signature& sig_;
  VarPool& pool_;
  const std::map<std::string, int>& outer_;      // caller-supplied pool vars
  std::map<std::string, int> fresh_;             // capitalized idents seen here
  std::vector<std::string> scope_;               // lambda binders, innermost last

  Term parse_term() {
    Term head = parse_primary();
    while (lx_.peek() == '(') head = parse_args(head);
    return head;
  }

  Term parse_primary() {
    if (lx_.try_lambda()) {
      std::string v = lx_.expect_ident("binder name");
      Type ann;
      if (lx_.try_punct(':')) ann = parse_type(lx_.s, &lx_.pos);
      lx_.expect('.');
      scope_.push_back(v);
      Term body = parse_term();
      scope_.pop_back();
      return mk_lam(v, ann, body);
    }
    if (lx_.try_punct('(')) {
      Term t = parse_term();
      lx_.expect(')');
      return t;
    }
    size_t at = lx_.pos;
    std::string id = lx_.expect_ident("a term");
    return resolve(id, at);
  }

  // head '(' args ')' with quantifier sugar
  Term parse_args(Term head) {
    lx_.expect('(');
    // sugar: Q(z, P, S) with Q a quantifier constant and z a plain ident
    if (head->kind == TermKind::Const && head->ctype.defined() && head->ctype.is_quantifier()) {
      size_t save = lx_.pos;
      std::string z = lx_.try_ident();
      if (!z.empty() && lx_.try_punct(',')) {
        scope_.push_back(z);
        Term restr = parse_term();
        lx_.expect(',');
        Term sc = parse_term();
        scope_.pop_back();
        lx_.expect(')');
        Type e = Type::base_e();
        return mk_app(mk_app(head, mk_lam(z, e, restr)), mk_lam(z, e, sc));
      }
      lx_.pos = save;
    }
    Term t = head;
    t = mk_app(t, parse_term());
    while (lx_.try_punct(',')) t = mk_app(t, parse_term());
    lx_.expect(')');
    return t;
  }

  Term resolve(const std::string& id, size_t at) {
    for (int i = (int)scope_.size() - 1; i >= 0; i--) {
      if (scope_[i] == id) return mk_bound((int)scope_.size() - 1 - i);
    }
    if (auto it = outer_.find(id); it != outer_.end()) return mk_var(it->second);
    if (const Type* ty = sig_.lookup(id)) return mk_const(id, *ty);
    if (auto it = fresh_.find(id); it != fresh_.end()) return mk_var(it->second);
    if (isupper((unsigned char)id[0])) {
      int v = pool_.fresh(id, VarKind::Existential);
      fresh_.emplace(id, v);
      return mk_var(v);
    }
    throw ParseError("unknown constant '" + id + "'", at);
  }
};

}  // namespace detail

inline Term parse_meaning(const std::string& text, const Signature& sig, VarPool& pool,
                          const std::map<std::string, int>& bound = {}) {
  detail::Lexer lx(text);
  detail::MeaningParser p(lx, sig, pool, bound);
  Term t = p.parse();
  if (!lx.eof()) throw ParseError("trailing characters after term", lx.pos);
  return t;
}

// ---------------------------------------------------------------------------
// Canonical printing: bound variables are renamed z1, z2, ... left to right;
// quantifier applications print in the ternary Q(z, P, S) form.

namespace detail {

struct TermPrinter {
  const VarPool* pool;
  int zn = 0;

  std::string print(const Term& t) {
    std::vector<std::string> env;
    return go(t, env);
  }

  std::string go(const Term& t, std::vector<std::string>& env) {
    switch (t->kind) {
      case TermKind::Const:
        return t->name;
      case TermKind::Bound: {
        int i = (int)env.size() - 1 - t->index;
        if (i < 0) return "#" + std::to_string(t->index);  // open term (debug only)
        return env[i];
      }
      case TermKind::Var:
        return pool ? pool->display(t->var) : "?" + std::to_string(t->var);
      case TermKind::Lam: {
        std::string v = fresh_z();
        env.push_back(v);
        std::string body = go(t->body, env);
        env.pop_back();
        return "lam " + v + ". " + body;
      }
      case TermKind::App: {
        Term head = t;
        std::vector<Term> args;
        while (head->kind == TermKind::App) {
          args.push_back(head->arg);
          head = head->fun;
        }
        std::reverse(args.begin(), args.end());
        if (head->kind == TermKind::Const && head->ctype.defined() &&
            head->ctype.is_quantifier() && args.size() == 2) {
          std::string v = fresh_z();
          std::string restr = apply_display(args[0], v, env);
          std::string scope = apply_display(args[1], v, env);
          return head->name + "(" + v + ", " + restr + ", " + scope + ")";
        }
        std::string hs = go(head, env);
        if (head->kind == TermKind::Lam) hs = "(" + hs + ")";
        std::string out = hs + "(";
        for (size_t i = 0; i < args.size(); i++) {
          if (i) out += ", ";
          out += go(args[i], env);
        }
        return out + ")";
      }
    }
    return "?";
  }

  // display of (f v) for a fresh variable name v, eta-expanding for readability
  std::string apply_display(const Term& f, const std::string& v, std::vector<std::string>& env) {
    if (f->kind == TermKind::Lam) {
      env.push_back(v);
      std::string s = go(f->body, env);
      env.pop_back();
      return s;
    }
    Term applied = mk_app(f, mk_const(v, Type()));
    return go(applied, env);
  }

  std::string fresh_z() { return "z" + std::to_string(++zn); }
};

}  // namespace detail

inline std::string print_term(const Term& t, const VarPool* pool = nullptr) {
  detail::TermPrinter p{pool};
  return p.print(t);
}

// ---------------------------------------------------------------------------
// Type inference (unification over simple types with metavariables for
// unannotated binders and unresolved glue variables).

class TypeInference {
 public:
  struct ITy {
    char base = 0;   // 'e'/'t' base, 0 = arrow or meta
    ITy *dom = nullptr, *cod = nullptr;
    bool is_meta = false;
    ITy* link = nullptr;  // union-find
  };

  explicit TypeInference(const VarPool* pool = nullptr) : pool_(pool) {}

  ITy* meta() {
    arena_.push_back(ITy{});
    arena_.back().is_meta = true;
    return &arena_.back();
  }
  ITy* base(char b) {
    arena_.push_back(ITy{});
    arena_.back().base = b;
    return &arena_.back();
  }
  ITy* arrow(ITy* d, ITy* c) {
    arena_.push_back(ITy{});
    arena_.back().dom = d;
    arena_.back().cod = c;
    return &arena_.back();
  }
  ITy* from_type(const Type& t) {
    if (t.is_base()) return base(t.base_name());
    return arrow(from_type(t.dom()), from_type(t.cod()));
  }

  ITy* resolve(ITy* t) {
    while (t->is_meta && t->link) t = t->link;
    return t;
  }

  void unify(ITy* a, ITy* b, const std::string& context) {
    a = resolve(a);
    b = resolve(b);
    if (a == b) return;
    if (a->is_meta) {
      if (occurs(a, b)) throw TypeError("cyclic type in " + context);
      a->link = b;
      return;
    }
    if (b->is_meta) {
      unify(b, a, context);
      return;
    }
    if (a->base != b->base)
      throw TypeError("type mismatch in " + context + ": " + show(a) + " vs " + show(b));
    if (a->base == 0) {
      unify(a->dom, b->dom, context);
      unify(a->cod, b->cod, context);
    }
  }

  // Inference type of a pool variable (memoized so shared vars constrain
  // each other across formulas).
  ITy* var_ty(int id) {
    auto it = vars_.find(id);
    if (it != vars_.end()) return it->second;
    ITy* t = nullptr;
    if (pool_ && pool_->info(id).type.defined()) t = from_type(pool_->info(id).type);
    else t = meta();
    vars_.emplace(id, t);
    return t;
  }

  ITy* infer(const Term& t, std::vector<ITy*>& benv) {
    switch (t->kind) {
      case TermKind::Const:
        if (!t->ctype.defined()) throw TypeError("constant '" + t->name + "' has no declared type");
        return from_type(t->ctype);
      case TermKind::Bound: {
        int i = (int)benv.size() - 1 - t->index;
        if (i < 0) throw TypeError("unbound lambda variable");
        return benv[i];
      }
      case TermKind::Var:
        return var_ty(t->var);
      case TermKind::Lam: {
        ITy* d = t->binder.defined() ? from_type(t->binder) : meta();
        benv.push_back(d);
        ITy* c = infer(t->body, benv);
        benv.pop_back();
        return arrow(d, c);
      }
      case TermKind::App: {
        ITy* tf = infer(t->fun, benv);
        ITy* ta = infer(t->arg, benv);
        ITy* res = meta();
        unify(tf, arrow(ta, res), "application " + print_term(t, pool_));
        return res;
      }
    }
    throw TypeError("bad term");
  }

  std::optional<Type> concrete(ITy* t) {
    t = resolve(t);
    if (t->is_meta) return std::nullopt;
    if (t->base != 0) return t->base == 'e' ? Type::base_e() : Type::base_t();
    auto d = concrete(t->dom);
    auto c = concrete(t->cod);
    if (!d || !c) return std::nullopt;
    return Type::arrow(*d, *c);
  }

  // Rewrites lambda binders with their resolved types where known.
  Term annotate(const Term& t, std::vector<ITy*>& benv) {
    switch (t->kind) {
      case TermKind::Const:
      case TermKind::Bound:
      case TermKind::Var:
        return t;
      case TermKind::Lam: {
        ITy* d = t->binder.defined() ? from_type(t->binder) : meta();
        benv.push_back(d);
        Term body = annotate(t->body, benv);
        benv.pop_back();
        auto ty = concrete(d);
        return mk_lam(t->hint, ty ? *ty : t->binder, body);
      }
      case TermKind::App:
        return mk_app(annotate(t->fun, benv), annotate(t->arg, benv));
    }
    return t;
  }

  const std::map<int, ITy*>& var_types() const { return vars_; }

 private:
  bool occurs(ITy* m, ITy* t) {
    t = resolve(t);
    if (t == m) return true;
    if (t->base == 0 && !t->is_meta) return occurs(m, t->dom) || occurs(m, t->cod);
    return false;
  }
  std::string show(ITy* t) {
    t = resolve(t);
    if (t->is_meta) return "?";
    if (t->base != 0) return std::string(1, t->base);
    std::string d = show(t->dom);
    ITy* rd = resolve(t->dom);
    if (rd->base == 0 && !rd->is_meta) d = "(" + d + ")";
    return d + "->" + show(t->cod);
  }

  const VarPool* pool_;
  std::deque<ITy> arena_;
  std::map<int, ITy*> vars_;
};

// Principal simple type of a term, using declared constant and pool-variable
// types. Fails if the type is not uniquely determined.
inline Type infer_type(const Term& t, const VarPool* pool = nullptr) {
  TypeInference ti(pool);
  std::vector<TypeInference::ITy*> benv;
  TypeInference::ITy* ty = ti.infer(t, benv);
  auto c = ti.concrete(ty);
  if (!c) throw TypeError("type of " + print_term(t, pool) + " is not uniquely determined");
  return *c;
}

// Inference + annotation in one pass (used by the glue loader).
inline Term infer_and_annotate(const Term& t, TypeInference& ti) {
  std::vector<TypeInference::ITy*> benv;
  ti.infer(t, benv);
  benv.clear();
  return ti.annotate(t, benv);
}

}  // namespace gluesem
