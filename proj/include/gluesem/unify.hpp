#pragma once

// Restricted higher-order (pattern) unification over meaning terms, plus
// first-order unification of sigma references. Flexible variables may be
// applied only to distinct eigenvariables / locally bound variables born
// after them; solutions may not mention eigenvariables born after the
// variable being solved. Raising and pruning keep that invariant while
// computing most general unifiers.

#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "gluesem/meaning.hpp"

namespace gluesem {

// A sigma-structure reference at proof time: a concrete node or a glue
// variable ranging over semantic structures (the paper's H).
struct SigmaRef {
  enum Kind { Node, Var } kind = Node;
  int id = -1;

  static SigmaRef node(int id) { return {Node, id}; }
  static SigmaRef var(int id) { return {Var, id}; }
  friend bool operator==(const SigmaRef& a, const SigmaRef& b) {
    return a.kind == b.kind && a.id == b.id;
  }
};

struct UnifyFailure {
  enum Kind { None, Clash, Escape, NotAPattern, Occurs } kind = None;
  std::string detail;
};

// Thrown internally; converted to a UnifyFailure result at the API boundary.
namespace detail {
struct UnifyFail {
  UnifyFailure info;
};
[[noreturn]] inline void fail(UnifyFailure::Kind k, const std::string& detail) {
  throw UnifyFail{UnifyFailure{k, detail}};
}
}  // namespace detail

class Unifier {
 public:
  explicit Unifier(VarPool* pool) : pool_(pool) {}

  // Copyable: the prover snapshots the state at choice points.
  Unifier(const Unifier&) = default;
  Unifier& operator=(const Unifier&) = default;

  bool unify_terms(const Term& a, const Term& b, UnifyFailure* why = nullptr) {
    try {
      std::vector<Type> benv;
      unify(a, b, benv);
      return true;
    } catch (const detail::UnifyFail& f) {
      if (why) *why = f.info;
      return false;
    }
  }

  bool unify_sigma(SigmaRef a, SigmaRef b) {
    a = resolve_sigma(a);
    b = resolve_sigma(b);
    if (a == b) return true;
    if (a.kind == SigmaRef::Var) {
      ssub_[a.id] = b;
      return true;
    }
    if (b.kind == SigmaRef::Var) {
      ssub_[b.id] = a;
      return true;
    }
    return false;  // distinct nodes
  }

  SigmaRef resolve_sigma(SigmaRef r) const {
    while (r.kind == SigmaRef::Var) {
      auto it = ssub_.find(r.id);
      if (it == ssub_.end()) break;
      r = it->second;
    }
    return r;
  }

  bool bound_meaning(int var) const { return msub_.count(var) != 0; }

  // Deep application of the current substitution (no normalization).
  Term apply(const Term& t) const {
    switch (t->kind) {
      case TermKind::Const:
      case TermKind::Bound:
        return t;
      case TermKind::Var: {
        auto it = msub_.find(t->var);
        return it == msub_.end() ? t : apply(it->second);
      }
      case TermKind::Lam: {
        Term b = apply(t->body);
        return b == t->body ? t : mk_lam(t->hint, t->binder, b);
      }
      case TermKind::App: {
        Term f = apply(t->fun);
        Term a = apply(t->arg);
        return (f == t->fun && a == t->arg) ? t : mk_app(f, a);
      }
    }
    return t;
  }

  Term apply_normal(const Term& t) const { return normalize(apply(t)); }

  const std::map<int, Term>& meaning_bindings() const { return msub_; }
  const std::map<int, SigmaRef>& sigma_bindings() const { return ssub_; }
  VarPool& pool() const { return *pool_; }

  // Bindings introduced by this unifier relative to `before` (for traces).
  std::string delta_string(const Unifier& before) const {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, term] : msub_) {
      if (before.msub_.count(v)) continue;
      if (!first) out += ", ";
      first = false;
      out += pool_->display(v) + ":=" + print_term(apply_normal(term), pool_);
    }
    for (const auto& [v, ref] : ssub_) {
      if (before.ssub_.count(v)) continue;
      if (!first) out += ", ";
      first = false;
      out += pool_->display(v) + ":=" + sigma_name_(resolve_sigma(ref));
    }
    return out + "}";
  }

  // Display hook for sigma nodes, set by the prover.
  std::function<std::string(int)> sigma_node_name;

 private:
  std::string sigma_name_(SigmaRef r) const {
    if (r.kind == SigmaRef::Node)
      return sigma_node_name ? sigma_node_name(r.id) : "#" + std::to_string(r.id);
    return pool_->display(r.id);
  }

  // Weak head normal form under the current substitution.
  Term whnf(Term t) const {
    for (;;) {
      if (t->kind == TermKind::Var) {
        auto it = msub_.find(t->var);
        if (it == msub_.end()) return t;
        t = it->second;
        continue;
      }
      if (t->kind == TermKind::App) {
        Term f = whnf(t->fun);
        if (f->kind == TermKind::Lam) {
          t = subst_bound(f->body, 0, t->arg);
          continue;
        }
        return f == t->fun ? t : mk_app(f, t->arg);
      }
      return t;
    }
  }

  static void spine(const Term& t, Term& head, std::vector<Term>& args) {
    head = t;
    args.clear();
    while (head->kind == TermKind::App) {
      args.push_back(head->arg);
      head = head->fun;
    }
    std::reverse(args.begin(), args.end());
  }

  bool is_flex(const Term& head) const {
    return head->kind == TermKind::Var &&
           pool_->info(head->var).kind == VarKind::Existential;
  }

  // A pattern argument: an eigenvariable or a locally bound variable.
  struct Param {
    bool is_bound;
    int id;  // de Bruijn index (at the depth of the occurrence) or eigen var id
    bool operator==(const Param& o) const { return is_bound == o.is_bound && id == o.id; }
  };

  std::vector<Param> pattern_args(int flex, const std::vector<Term>& args) const {
    std::vector<Param> out;
    for (const Term& raw : args) {
      Term a = whnf(raw);
      Param p;
      if (a->kind == TermKind::Bound) {
        p = Param{true, a->index};
      } else if (a->kind == TermKind::Var && pool_->info(a->var).kind == VarKind::Eigen) {
        p = Param{false, a->var};
      } else {
        detail::fail(UnifyFailure::NotAPattern,
                     pool_->display(flex) + " applied to non-eigenvariable argument " +
                         print_term(a, pool_));
      }
      for (const Param& q : out)
        if (q == p)
          detail::fail(UnifyFailure::NotAPattern,
                       pool_->display(flex) + " applied to repeated argument");
      out.push_back(p);
    }
    return out;
  }

  void unify(Term a, Term b, std::vector<Type>& benv) {
    a = whnf(a);
    b = whnf(b);
    if (a->kind == TermKind::Lam || b->kind == TermKind::Lam) {
      if (a->kind != TermKind::Lam) std::swap(a, b);
      if (b->kind == TermKind::Lam) {
        benv.push_back(a->binder.defined() ? a->binder : b->binder);
        unify(a->body, b->body, benv);
        benv.pop_back();
      } else {
        // eta-expand b
        benv.push_back(a->binder);
        unify(a->body, mk_app(shift_term(b, 1), mk_bound(0)), benv);
        benv.pop_back();
      }
      return;
    }

    Term ha, hb;
    std::vector<Term> aa, ab;
    spine(a, ha, aa);
    spine(b, hb, ab);

    bool fa = is_flex(ha), fb = is_flex(hb);
    if (fa && fb && ha->var == hb->var) {
      flex_same(ha->var, aa, ab, benv);
      return;
    }
    if (fa || fb) {
      // Bind the younger variable (ties broken by id) so that solutions only
      // need eigenvariables visible at the older variable's scope.
      if (fa && fb) {
        int ba = pool_->info(ha->var).birth, bb = pool_->info(hb->var).birth;
        if (std::make_pair(ba, ha->var) < std::make_pair(bb, hb->var)) {
          std::swap(a, b);
          std::swap(ha, hb);
          std::swap(aa, ab);
        }
      } else if (fb) {
        std::swap(a, b);
        std::swap(ha, hb);
        std::swap(aa, ab);
      }
      bind_flex(ha->var, aa, b, benv);
      return;
    }

    // rigid-rigid
    bool same = false;
    switch (ha->kind) {
      case TermKind::Const:
        same = hb->kind == TermKind::Const && ha->name == hb->name;
        break;
      case TermKind::Bound:
        same = hb->kind == TermKind::Bound && ha->index == hb->index;
        break;
      case TermKind::Var:
        same = hb->kind == TermKind::Var && ha->var == hb->var;
        break;
      default:
        same = false;
    }
    if (!same || aa.size() != ab.size())
      detail::fail(UnifyFailure::Clash, "rigid mismatch: " + print_term(a, pool_) + " vs " +
                                            print_term(b, pool_));
    for (size_t i = 0; i < aa.size(); i++) unify(aa[i], ab[i], benv);
  }

  // F(xs) = F(ys): keep exactly the argument positions where both sides agree.
  void flex_same(int f, const std::vector<Term>& xs, const std::vector<Term>& ys,
                 const std::vector<Type>& benv) {
    std::vector<Param> px = pattern_args(f, xs);
    std::vector<Param> py = pattern_args(f, ys);
    if (px.size() != py.size())
      detail::fail(UnifyFailure::Clash, "arity mismatch on " + pool_->display(f));
    int n = (int)px.size();
    bool all_equal = true;
    std::vector<int> kept;
    for (int i = 0; i < n; i++) {
      if (px[i] == py[i]) kept.push_back(i);
      else all_equal = false;
    }
    if (all_equal) return;
    const VarInfo& fi = pool_->info(f);
    Type hty = fresh_var_type(fi.type, px, kept, benv);
    int h = pool_->fresh_at(fi.name, VarKind::Existential, hty, fi.birth);
    Term body = mk_var(h);
    for (int i : kept) body = mk_app(body, mk_bound(n - 1 - i));
    Term sol = body;
    for (int i = n - 1; i >= 0; i--) sol = mk_lam("u", param_type(px[i], benv), sol);
    msub_[f] = sol;
  }

  Type param_type(const Param& p, const std::vector<Type>& benv) const {
    if (p.is_bound) {
      int slot = (int)benv.size() - 1 - p.id;
      return slot >= 0 ? benv[slot] : Type();
    }
    return pool_->info(p.id).type;
  }

  // Type of a raised/pruned variable: kept argument types -> result type of
  // the original variable (null when not determinable).
  Type fresh_var_type(const Type& orig, const std::vector<Param>& args,
                      const std::vector<int>& kept, const std::vector<Type>& benv) const {
    if (!orig.defined()) return Type();
    Type res = orig;
    for (size_t i = 0; i < args.size(); i++) {
      if (!res.is_arrow()) return Type();
      res = res.cod();
    }
    Type out = res;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      Type at = param_type(args[*it], benv);
      if (!at.defined()) return Type();
      out = Type::arrow(at, out);
    }
    return out;
  }

  // Solve F(args) = s.
  void bind_flex(int f, const std::vector<Term>& raw_args, const Term& s,
                 const std::vector<Type>& benv) {
    std::vector<Param> args = pattern_args(f, raw_args);
    int n = (int)args.size();
    int eq_depth = (int)benv.size();
    std::map<std::pair<bool, int>, int> argpos;
    for (int i = 0; i < n; i++) argpos[{args[i].is_bound, args[i].id}] = i;
    std::vector<Type> inner(benv);
    Term body = build(f, args, argpos, s, eq_depth, 0, inner);
    Term sol = body;
    for (int i = n - 1; i >= 0; i--) sol = mk_lam("u", param_type(args[i], benv), sol);
    msub_[f] = sol;
  }

  // Rebuild s as the body of F's solution (under n binders for F's pattern
  // arguments). `dd` counts binders inside s; equation-level binders sit
  // below them in the de Bruijn numbering.
  Term build(int f, const std::vector<Param>& fargs,
             const std::map<std::pair<bool, int>, int>& argpos, const Term& s0, int eq_depth,
             int dd, std::vector<Type>& benv) {
    int fbirth = pool_->info(f).birth;
    int n = (int)fargs.size();
    Term s = whnf(s0);

    if (s->kind == TermKind::Lam) {
      benv.push_back(s->binder);
      Term b = build(f, fargs, argpos, s->body, eq_depth, dd + 1, benv);
      benv.pop_back();
      return mk_lam(s->hint, s->binder, b);
    }

    Term head;
    std::vector<Term> sargs;
    spine(s, head, sargs);

    auto map_param = [&](const Param& p, bool flex_ctx, bool* pruned) -> Term {
      // Where does parameter p land inside F's solution body?
      if (p.is_bound && p.id < dd) return mk_bound(p.id);  // local to s
      if (p.is_bound) {
        Param eq{true, p.id - dd};
        auto it = argpos.find({eq.is_bound, eq.id});
        if (it != argpos.end()) return mk_bound(n - 1 - it->second + dd);
        if (flex_ctx) {
          *pruned = true;
          return nullptr;
        }
        detail::fail(UnifyFailure::Escape, "bound variable escapes its scope");
      }
      auto it = argpos.find({false, p.id});
      if (it != argpos.end()) return mk_bound(n - 1 - it->second + dd);
      if (pool_->info(p.id).birth < fbirth) return mk_var(p.id);
      if (flex_ctx) {
        *pruned = true;
        return nullptr;
      }
      detail::fail(UnifyFailure::Escape, "eigenvariable " + pool_->display(p.id) +
                                             " escapes into the solution of " +
                                             pool_->display(f));
    };

    if (is_flex(head)) {
      int g = head->var;
      if (g == f)
        detail::fail(UnifyFailure::Occurs,
                     pool_->display(f) + " occurs in its own solution");
      std::vector<Param> gargs = pattern_args(g, sargs);
      // normalize bound indices of g's args to the current build point
      std::vector<Term> mapped(gargs.size());
      std::vector<bool> keep(gargs.size(), false);
      bool any_pruned = false;
      for (size_t i = 0; i < gargs.size(); i++) {
        bool pruned = false;
        Term m = map_param(gargs[i], /*flex_ctx=*/true, &pruned);
        if (pruned) {
          any_pruned = true;
        } else {
          keep[i] = true;
          mapped[i] = m;
        }
      }
      int gbirth = pool_->info(g).birth;
      if (!any_pruned && gbirth <= fbirth) {
        Term out = head;
        for (size_t i = 0; i < gargs.size(); i++) out = mk_app(out, mapped[i]);
        return out;
      }
      // Raise/prune: replace g by a fresh variable over the kept positions,
      // scoped at the older of the two variables.
      std::vector<int> kept_idx;
      for (size_t i = 0; i < gargs.size(); i++)
        if (keep[i]) kept_idx.push_back((int)i);
      const VarInfo& gi = pool_->info(g);
      Type gty = fresh_var_type(gi.type, gargs, kept_idx, benv);
      int g2 = pool_->fresh_at(gi.name, VarKind::Existential, gty, std::min(gbirth, fbirth));
      int m = (int)gargs.size();
      Term gbind = mk_var(g2);
      for (int i : kept_idx) gbind = mk_app(gbind, mk_bound(m - 1 - i));
      for (int i = m - 1; i >= 0; i--) gbind = mk_lam("u", param_type(gargs[i], benv), gbind);
      msub_[g] = gbind;
      Term out = mk_var(g2);
      for (int i : kept_idx) out = mk_app(out, mapped[i]);
      return out;
    }

    // rigid head
    Term out;
    switch (head->kind) {
      case TermKind::Const:
        out = head;
        break;
      case TermKind::Bound: {
        bool pruned = false;
        out = map_param(Param{true, head->index}, /*flex_ctx=*/false, &pruned);
        break;
      }
      case TermKind::Var: {  // eigen
        bool pruned = false;
        out = map_param(Param{false, head->var}, /*flex_ctx=*/false, &pruned);
        break;
      }
      default:
        detail::fail(UnifyFailure::Clash, "unexpected term shape");
    }
    for (const Term& a : sargs)
      out = mk_app(out, build(f, fargs, argpos, a, eq_depth, dd, benv));
    return out;
  }

  VarPool* pool_;
  std::map<int, Term> msub_;
  std::map<int, SigmaRef> ssub_;
};

// ---------------------------------------------------------------------------
// Standalone entry point matching the spec's operation: solve a set of term
// equations, reporting the substitution or the first failure. Scope indices
// are the birth stamps recorded in the pool.

struct Substitution {
  std::map<int, Term> meaning;        // existential var id -> normal term
  std::map<int, SigmaRef> sigma;      // sigma var id -> resolved reference
};

struct UnifyResult {
  bool ok = false;
  UnifyFailure failure;
  Substitution subst;
};

inline UnifyResult pattern_unify(const std::vector<std::pair<Term, Term>>& equations,
                                 VarPool& pool) {
  Unifier u(&pool);
  UnifyResult r;
  for (const auto& [l, rterm] : equations) {
    if (!u.unify_terms(l, rterm, &r.failure)) return r;
  }
  r.ok = true;
  for (const auto& [v, t] : u.meaning_bindings()) {
    (void)t;
    r.subst.meaning[v] = u.apply_normal(mk_var(v));
  }
  for (const auto& [v, ref] : u.sigma_bindings()) {
    (void)ref;
    r.subst.sigma[v] = u.resolve_sigma(SigmaRef::var(v));
  }
  return r;
}

}  // namespace gluesem
