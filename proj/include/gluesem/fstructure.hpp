#pragma once

// F-structures (attribute-value graphs with unification) and sigma
// structures (semantic projections carrying VAR / RESTR / ANT).

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gluesem/meaning.hpp"

namespace gluesem {

// Atomic f-structure value: 'appoint' (quoted semantic form) or PAST (symbol).
struct FAtom {
  std::string value;
  bool quoted = true;
  friend bool operator==(const FAtom& a, const FAtom& b) {
    return a.value == b.value && a.quoted == b.quoted;
  }
  friend bool operator!=(const FAtom& a, const FAtom& b) { return !(a == b); }
  std::string str() const { return quoted ? "'" + value + "'" : value; }
};

using FValue = std::variant<FAtom, int>;  // atom or node id

struct FPath {
  int root = -1;
  std::vector<std::string> attrs;
};

struct Equation {
  FPath lhs;
  bool rhs_is_atom = false;
  FAtom atom;
  FPath path;

  static Equation assign(FPath p, FAtom a) {
    Equation e;
    e.lhs = std::move(p);
    e.rhs_is_atom = true;
    e.atom = std::move(a);
    return e;
  }
  static Equation equate(FPath a, FPath b) {
    Equation e;
    e.lhs = std::move(a);
    e.path = std::move(b);
    return e;
  }
};

class FGraph {
 public:
  int new_node(std::string label = "") {
    nodes_.push_back(Node{(int)nodes_.size(), {}, std::move(label)});
    return (int)nodes_.size() - 1;
  }

  int find(int n) const {
    while (nodes_[n].parent != n) n = nodes_[n].parent;
    return n;
  }

  size_t node_count() const { return nodes_.size(); }

  const std::map<std::string, FValue>& attrs(int n) const { return nodes_[find(n)].attrs; }

  const std::string& label(int n) const { return nodes_[find(n)].label; }
  void set_label(int n, std::string l) { nodes_[find(n)].label = std::move(l); }

  // Value at the end of a path; throws on a missing attribute.
  FValue get_path(int root, const std::vector<std::string>& attrs) const {
    FValue cur = FValue(find(root));
    for (const std::string& a : attrs) {
      int* node = std::get_if<int>(&cur);
      if (!node) throw Error("missing-attribute " + a + ": path descends into an atom");
      const auto& m = nodes_[find(*node)].attrs;
      auto it = m.find(a);
      if (it == m.end())
        throw Error("missing-attribute " + a + " on " + display_label(*node));
      cur = it->second;
      if (int* nn = std::get_if<int>(&cur)) cur = FValue(find(*nn));
    }
    return cur;
  }

  bool has_path(int root, const std::vector<std::string>& attrs) const {
    try {
      (void)get_path(root, attrs);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  // Least graph satisfying the equations; merging unifies feature sets.
  void solve(const std::vector<Equation>& eqs) {
    for (const Equation& e : eqs) {
      FValue rhs = e.rhs_is_atom ? FValue(e.atom) : eval_path(e.path);
      if (e.lhs.attrs.empty()) {
        const int* n = std::get_if<int>(&rhs);
        if (!n)
          throw Error("clash: cannot equate node " + display_label(e.lhs.root) +
                      " with atom " + e.atom.str());
        merge(e.lhs.root, *n);
        continue;
      }
      int holder = walk_create(e.lhs.root, e.lhs.attrs, /*stop_before_last=*/true);
      set_attr(holder, e.lhs.attrs.back(), rhs);
    }
  }

  // Value at the end of a path, creating fresh nodes along the way.
  FValue eval_path(const FPath& p) {
    if (p.attrs.empty()) return FValue(find(p.root));
    int holder = walk_create(p.root, p.attrs, /*stop_before_last=*/true);
    const std::string& last = p.attrs.back();
    auto& m = nodes_[holder].attrs;
    auto it = m.find(last);
    if (it == m.end()) {
      int fresh = new_node();
      m.emplace(last, FValue(fresh));
      return FValue(fresh);
    }
    if (const int* n = std::get_if<int>(&it->second)) return FValue(find(*n));
    return it->second;
  }

  void set_attr(int n, const std::string& attr, FValue v) {
    n = find(n);
    auto& m = nodes_[n].attrs;
    auto it = m.find(attr);
    if (it == m.end()) {
      m.emplace(attr, v);
      return;
    }
    unify_values(it->second, v, attr);
  }

  void merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // labeled representatives win so input names survive merging
    if (nodes_[a].label.empty() && !nodes_[b].label.empty()) std::swap(a, b);
    nodes_[b].parent = a;
    std::map<std::string, FValue> battrs;
    battrs.swap(nodes_[b].attrs);
    for (auto& [attr, v] : battrs) set_attr(a, attr, v);
  }

  std::string display_label(int n) const {
    n = find(n);
    return nodes_[n].label.empty() ? "#" + std::to_string(n) : nodes_[n].label;
  }

  // Canonical text form: label:[ATTR v; ...]. Detects cycles rather than
  // looping.
  std::string serialize(int root) const {
    std::set<int> onpath;
    return ser(find(root), onpath);
  }

  // Structural isomorphism up to node renaming.
  static bool isomorphic(const FGraph& a, int ra, const FGraph& b, int rb) {
    std::map<int, int> bij;
    return iso(a, a.find(ra), b, b.find(rb), bij);
  }

  // Stable display labels n1, n2, ... assigned breadth-first from the root.
  void assign_labels(int root) {
    int counter = 0;
    std::vector<int> queue{find(root)};
    std::set<int> seen;
    while (!queue.empty()) {
      int n = queue.front();
      queue.erase(queue.begin());
      if (!seen.insert(n).second) continue;
      nodes_[n].label = "n" + std::to_string(++counter);
      for (const auto& [attr, v] : attr_order(n))
        if (const int* child = std::get_if<int>(&v)) queue.push_back(find(*child));
    }
  }

 private:
  struct Node {
    int parent;
    std::map<std::string, FValue> attrs;
    std::string label;
  };

  // Attribute display order: the conventional LFG ordering first.
  std::vector<std::pair<std::string, FValue>> attr_order(int n) const {
    static const std::vector<std::string> preferred = {"PRED",    "SPEC", "TENSE",
                                                       "SUBJ",    "OBJ",  "OBL_OF",
                                                       "VAR",     "RESTR", "ANT"};
    n = find(n);
    std::vector<std::pair<std::string, FValue>> out;
    const auto& m = nodes_[n].attrs;
    for (const std::string& p : preferred) {
      auto it = m.find(p);
      if (it != m.end()) out.emplace_back(it->first, it->second);
    }
    for (const auto& [attr, v] : m) {
      if (std::find(preferred.begin(), preferred.end(), attr) == preferred.end())
        out.emplace_back(attr, v);
    }
    return out;
  }

  void unify_values(FValue& slot, const FValue& v, const std::string& attr) {
    if (const FAtom* a1 = std::get_if<FAtom>(&slot)) {
      if (const FAtom* a2 = std::get_if<FAtom>(&v)) {
        if (*a1 != *a2)
          throw Error("clash: attribute " + attr + " has both " + a1->str() + " and " +
                      a2->str());
        return;
      }
      throw Error("clash: attribute " + attr + " has both an atom and a structure");
    }
    int n1 = std::get<int>(slot);
    if (const int* n2 = std::get_if<int>(&v)) {
      merge(n1, *n2);
      slot = FValue(find(n1));
      return;
    }
    throw Error("clash: attribute " + attr + " has both a structure and an atom");
  }

  int walk_create(int root, const std::vector<std::string>& attrs, bool stop_before_last) {
    int cur = find(root);
    size_t upto = attrs.size() - (stop_before_last ? 1 : 0);
    for (size_t i = 0; i < upto; i++) {
      auto& m = nodes_[cur].attrs;
      auto it = m.find(attrs[i]);
      if (it == m.end()) {
        int fresh = new_node();
        m.emplace(attrs[i], FValue(fresh));
        cur = fresh;
      } else if (int* nn = std::get_if<int>(&it->second)) {
        cur = find(*nn);
      } else {
        throw Error("clash: attribute " + attrs[i] + " already holds an atom");
      }
    }
    return cur;
  }

  std::string ser(int n, std::set<int>& onpath) const {
    n = find(n);
    if (!onpath.insert(n).second) throw Error("cycle detected at " + display_label(n));
    std::string out = display_label(n) + ":[";
    bool first = true;
    for (const auto& [attr, v] : attr_order(n)) {
      if (!first) out += "; ";
      first = false;
      out += attr + " ";
      if (const FAtom* a = std::get_if<FAtom>(&v)) out += a->str();
      else out += ser(std::get<int>(v), onpath);
    }
    out += "]";
    onpath.erase(n);
    return out;
  }

  static bool iso(const FGraph& a, int na, const FGraph& b, int nb, std::map<int, int>& bij) {
    na = a.find(na);
    nb = b.find(nb);
    auto it = bij.find(na);
    if (it != bij.end()) return it->second == nb;
    bij.emplace(na, nb);
    const auto& ma = a.nodes_[na].attrs;
    const auto& mb = b.nodes_[nb].attrs;
    if (ma.size() != mb.size()) return false;
    for (const auto& [attr, va] : ma) {
      auto jt = mb.find(attr);
      if (jt == mb.end()) return false;
      const FAtom* x = std::get_if<FAtom>(&va);
      const FAtom* y = std::get_if<FAtom>(&jt->second);
      if ((x == nullptr) != (y == nullptr)) return false;
      if (x) {
        if (*x != *y) return false;
      } else if (!iso(a, std::get<int>(va), b, std::get<int>(jt->second), bij)) {
        return false;
      }
    }
    return true;
  }

  std::vector<Node> nodes_;
};

// ---------------------------------------------------------------------------
// Sigma structures. Projection is functional and lazily materialized; VAR and
// RESTR children appear on first reference, ANT only via explicit links.

class SigmaSpace {
 public:
  explicit SigmaSpace(const FGraph* fg) : fg_(fg) {}

  int project(int fnode) {
    int rep = fg_->find(fnode);
    auto it = of_fnode_.find(rep);
    if (it != of_fnode_.end()) return it->second;
    int id = (int)nodes_.size();
    nodes_.push_back(SNode{"s(" + fg_->display_label(rep) + ")", {}});
    of_fnode_.emplace(rep, id);
    return id;
  }

  // VAR / RESTR create lazily; ANT must have been linked.
  int select(int snode, const std::string& attr, std::string* err = nullptr) {
    if (attr != "VAR" && attr != "RESTR" && attr != "ANT") {
      if (err) { *err = "unknown sigma attribute " + attr; return -1; }
      throw Error("unknown sigma attribute " + attr);
    }
    auto& m = nodes_[snode].attrs;
    auto it = m.find(attr);
    if (it != m.end()) return it->second;
    if (attr == "ANT") {
      if (err) { *err = "missing-attribute ANT on " + nodes_[snode].display; return -1; }
      throw Error("missing-attribute ANT on " + nodes_[snode].display);
    }
    int id = (int)nodes_.size();
    nodes_.push_back(SNode{"(" + nodes_[snode].display + " " + attr + ")", {}});
    m.emplace(attr, id);
    return id;
  }

  // slink: set (snode ATTR) = target. Idempotent; clashes on a different value.
  void add_link(int snode, const std::string& attr, int target) {
    if (attr != "VAR" && attr != "RESTR" && attr != "ANT")
      throw Error("unknown sigma attribute " + attr);
    auto& m = nodes_[snode].attrs;
    auto it = m.find(attr);
    if (it != m.end()) {
      if (it->second != target)
        throw Error("clash: " + nodes_[snode].display + " " + attr + " already set to " +
                    nodes_[it->second].display);
      return;
    }
    m.emplace(attr, target);
  }

  const std::string& display(int snode) const { return nodes_[snode].display; }
  size_t size() const { return nodes_.size(); }

 private:
  struct SNode {
    std::string display;
    std::map<std::string, int> attrs;
  };
  const FGraph* fg_;
  std::vector<SNode> nodes_;
  std::map<int, int> of_fnode_;
};

// One syntactic analysis: a solved, frozen f-structure graph plus its sigma
// projections.
struct Analysis {
  FGraph fg;
  int root = -1;
  std::shared_ptr<SigmaSpace> sigma;

  void freeze() { sigma = std::make_shared<SigmaSpace>(&fg); }
};

// ---------------------------------------------------------------------------
// Text format:  label ':' '[' Attr Value {';' Attr Value} ']'  with Value a
// quoted atom, a bare symbol, or a nested labeled structure. slink lines add
// sigma links: slink (label ANT) = label.

struct FStructureFile {
  Analysis analysis;
  std::map<std::string, int> labels;
  std::vector<std::pair<std::pair<std::string, std::string>, std::string>> slinks;
  // ((source label, attr), target label); applied after freeze()
};

inline FStructureFile parse_fstructure(const std::string& text) {
  FStructureFile out;
  detail::Lexer lx(text);
  auto get_node = [&](const std::string& label) {
    auto it = out.labels.find(label);
    if (it != out.labels.end()) return it->second;
    int id = out.analysis.fg.new_node(label);
    out.labels.emplace(label, id);
    return id;
  };

  std::function<int()> parse_struct = [&]() -> int {
    std::string label = lx.expect_ident("node label");
    lx.expect(':');
    lx.expect('[');
    int node = get_node(label);
    if (!lx.try_punct(']')) {
      do {
        std::string attr = lx.expect_ident("attribute name");
        lx.skip();
        if (lx.peek() == '\'') {
          lx.pos++;
          size_t start = lx.pos;
          while (lx.pos < lx.s.size() && lx.s[lx.pos] != '\'') lx.pos++;
          if (lx.pos >= lx.s.size()) throw ParseError("unterminated atom", start);
          std::string v = lx.s.substr(start, lx.pos - start);
          lx.pos++;
          out.analysis.fg.set_attr(node, attr, FAtom{v, true});
        } else {
          size_t save = lx.pos;
          std::string tok = lx.expect_ident("attribute value");
          lx.skip();
          if (lx.pos < lx.s.size() && lx.s[lx.pos] == ':') {
            lx.pos = save;
            int child = parse_struct();
            out.analysis.fg.set_attr(node, attr, FValue(child));
          } else {
            out.analysis.fg.set_attr(node, attr, FAtom{tok, false});
          }
        }
      } while (lx.try_punct(';'));
      lx.expect(']');
    }
    return node;
  };

  bool have_root = false;
  while (!lx.eof()) {
    size_t save = lx.pos;
    std::string kw = lx.try_ident();
    if (kw == "slink") {
      lx.expect('(');
      std::string src = lx.expect_ident("node label");
      std::string attr = lx.expect_ident("attribute");
      lx.expect(')');
      lx.expect('=');
      std::string dst = lx.expect_ident("node label");
      out.slinks.push_back({{src, attr}, dst});
      continue;
    }
    lx.pos = save;
    int node = parse_struct();
    if (!have_root) {
      out.analysis.root = node;
      have_root = true;
    }
  }
  if (!have_root) throw Error("no f-structure found in input");
  return out;
}

}  // namespace gluesem
