#include "sheafkit/names.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace sheafkit {

namespace {
constexpr int kCarrierCap = 200000;
}

int NameStore::slot(int at, int arrow) const {
  const auto& v = cat_->arrows_into[at];
  auto it = std::find(v.begin(), v.end(), arrow);
  if (it == v.end()) throw Error("CodomainMismatch", "arrow does not land in the root object");
  return static_cast<int>(it - v.begin());
}

int NameStore::intern(int at, std::vector<std::vector<int>> entries) {
  if (entries.size() != cat_->arrows_into[at].size())
    throw Error("ShapeMismatch", "one entry set per incoming arrow expected");
  int rank = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto& e = entries[i];
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    int d = cat_->dom(cat_->arrows_into[at][i]);
    for (int m : e) {
      if (nodes_[m].at != d)
        throw Error("ShapeMismatch", "entry member rooted at the wrong object");
      rank = std::max(rank, nodes_[m].rank + 1);
    }
  }
  auto key = std::make_pair(at, entries);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(nodes_.size());
  if (id >= kCarrierCap) throw Error("CarrierCap", "name store exceeded the desk-scale cap");
  nodes_.push_back(Node{at, entries, rank});
  index_.emplace(std::move(key), id);
  return id;
}

int NameStore::empty_name(int at) {
  return intern(at, std::vector<std::vector<int>>(cat_->arrows_into[at].size()));
}

int NameStore::restrict_name(int v, int arrow) {
  auto key = std::make_pair(v, arrow);
  auto it = restrict_memo_.find(key);
  if (it != restrict_memo_.end()) return it->second;
  const Node& n = nodes_[v];
  if (cat_->cod(arrow) != n.at) throw Error("CodomainMismatch", "restriction along a non-incoming arrow");
  int d = cat_->dom(arrow);
  std::vector<std::vector<int>> entries(cat_->arrows_into[d].size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    int g = cat_->arrows_into[d][i];
    entries[i] = n.entries[slot(n.at, cat_->table[arrow][g])];
  }
  int r = intern(d, std::move(entries));
  restrict_memo_.emplace(key, r);
  return r;
}

bool NameStore::natural(int v) {
  auto it = natural_memo_.find(v);
  if (it != natural_memo_.end()) return it->second;
  const Node n = nodes_[v];
  bool ok = true;
  for (std::size_t i = 0; i < n.entries.size() && ok; ++i) {
    int f = cat_->arrows_into[n.at][i];
    for (int m : n.entries[i]) {
      for (int g : cat_->arrows_into[cat_->dom(f)]) {
        int fg = cat_->table[f][g];
        const auto& target = n.entries[slot(n.at, fg)];
        int mg = restrict_name(m, g);
        if (!std::binary_search(target.begin(), target.end(), mg)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
  }
  natural_memo_.emplace(v, ok);
  return ok;
}

bool NameStore::hereditarily_natural(int v) {
  if (!natural(v)) return false;
  for (const auto& e : nodes_[v].entries)
    for (int m : e)
      if (!hereditarily_natural(m)) return false;
  return true;
}

namespace {

// Recursive bisimulation on raw names; memoized on ordered pairs. The
// recursion terminates because each step strictly lowers rank(w) (members of
// t'(fg)) while rank(v·g) ≤ rank(v).
bool equiv_rec(NameStore& st, const Topology& top, int v, int w,
               std::map<std::pair<int, int>, bool>& memo) {
  if (v == w) return true;
  auto key = std::make_pair(std::min(v, w), std::max(v, w));
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  const auto& cat = st.category();
  const auto nv = st.node(v), nw = st.node(w);
  bool ok = nv.at == nw.at;
  // one direction: members of v find matches inside w over a cover
  auto half = [&](const NameStore::Node& a, int bid) {
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
      int f = cat.arrows_into[a.at][i];
      for (int m : a.entries[i]) {
        Bitset sieve(cat.n_arrows());
        for (int g : cat.arrows_into[cat.dom(f)]) {
          int fg = cat.table[f][g];
          int mg = st.restrict_name(m, g);
          for (int m2 : st.node(bid).entries[st.slot(a.at, fg)])
            if (equiv_rec(st, top, mg, m2, memo)) {
              sieve.set(g);
              break;
            }
        }
        if (!top.covers(cat.dom(f), sieve)) return false;
      }
    }
    return true;
  };
  if (ok) ok = half(nv, w) && half(nw, v);
  memo[key] = ok;
  return ok;
}

}  // namespace

bool names_equiv(NameStore& store, const Topology& top, int v, int w) {
  if (store.node(v).at != store.node(w).at)
    throw Error("RootMismatch", "names are rooted at different objects");
  std::map<std::pair<int, int>, bool> memo;
  return equiv_rec(store, top, v, w, memo);
}

int Universe::restrict_class(int cls, int arrow) const {
  auto it = res[cls].find(arrow);
  if (it == res[cls].end())
    throw Error("CodomainMismatch", "restriction along a non-incoming arrow");
  return it->second;
}

bool Universe::forced_mem(int i, int j) const {
  int at = classes[i].at;
  if (classes[j].at != at) throw Error("RootMismatch", "membership needs a common stage");
  return mem[at][dense_index[at][j]].test(dense_index[at][i]);
}

int Universe::lookup(int at, const std::vector<std::vector<int>>& entries) const {
  auto e = entries;
  for (auto& v : e) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  auto it = class_of_sig.find(std::make_pair(at, e));
  if (it == class_of_sig.end()) throw Error("UnknownLiteral", "no such name in the carrier");
  return it->second;
}

std::string Universe::describe(int cls) const {
  const auto& info = classes[cls];
  const auto& arrows = cat->arrows_into[info.at];
  // entries forced by naturality from the identity slot are elided on posets
  std::string out;
  bool braces_only = cat->poset;
  if (braces_only) {
    // on a poset the identity entry determines the name up to the forced
    // lower entries; print it as a plain set when the rest agrees
    int ids = -1;
    for (std::size_t i = 0; i < arrows.size(); ++i)
      if (arrows[i] == cat->identity[info.at]) ids = static_cast<int>(i);
    for (std::size_t i = 0; i < arrows.size() && braces_only; ++i) {
      if (static_cast<int>(i) == ids) continue;
      std::vector<int> forced;
      for (int m : info.entries[ids]) forced.push_back(restrict_class(m, arrows[i]));
      std::sort(forced.begin(), forced.end());
      forced.erase(std::unique(forced.begin(), forced.end()), forced.end());
      if (forced != info.entries[i]) braces_only = false;
    }
    if (braces_only) {
      out = "{";
      bool first = true;
      for (int m : info.entries[ids]) {
        if (!first) out += ",";
        first = false;
        out += describe(m);
      }
      return out + "}";
    }
  }
  out = "sup(" + cat->objects[info.at] + "){";
  bool first_arrow = true;
  for (std::size_t i = 0; i < arrows.size(); ++i) {
    if (!first_arrow) out += ", ";
    first_arrow = false;
    out += cat->arrows[arrows[i]].name + ":{";
    bool first = true;
    for (int m : info.entries[i]) {
      if (!first) out += ",";
      first = false;
      out += describe(m);
    }
    out += "}";
  }
  return out + "}";
}

namespace {

// one-step bisimulation on class-level signatures
bool class_sig_bisim(const Universe& u, int at,
                     const std::vector<std::vector<int>>& a,
                     const std::vector<std::vector<int>>& b) {
  const auto& cat = *u.cat;
  auto half = [&](const std::vector<std::vector<int>>& s,
                  const std::vector<std::vector<int>>& t) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      int f = cat.arrows_into[at][i];
      int d = cat.dom(f);
      for (int m : s[i]) {
        Bitset sieve(cat.n_arrows());
        for (int g : cat.arrows_into[d]) {
          int fg = cat.table[f][g];
          // slot of fg among arrows_into[at]
          const auto& v = cat.arrows_into[at];
          int sl = static_cast<int>(std::find(v.begin(), v.end(), fg) - v.begin());
          int mg = u.restrict_class(m, g);
          if (std::binary_search(t[sl].begin(), t[sl].end(), mg)) sieve.set(g);
        }
        if (!u.top.covers(d, sieve)) return false;
      }
    }
    return true;
  };
  return half(a, b) && half(b, a);
}

}  // namespace

Universe build_universe(const FiniteCategory& cat, const Topology& top, int rank_bound) {
  Universe u;
  u.cat = &cat;
  u.top = top;
  u.rank_bound = rank_bound;

  for (int level = 1; level <= rank_bound; ++level) {
    // enumerate class-level signatures over the current classes:
    // per arrow f into c a set of classes at dom f, closed under the
    // class-level naturality m ∈ S(f) ⇒ m·g ∈ S(fg)
    std::vector<std::pair<int, std::vector<std::vector<int>>>> fresh;
    for (int c = 0; c < cat.n_objects(); ++c) {
      const auto& arrows = cat.arrows_into[c];
      std::vector<std::vector<int>> candidates(arrows.size());
      for (std::size_t i = 0; i < arrows.size(); ++i) {
        int d = cat.dom(arrows[i]);
        for (int k = 0; k < static_cast<int>(u.classes.size()); ++k)
          if (u.classes[k].at == d) candidates[i].push_back(k);
      }
      std::vector<std::vector<int>> entries(arrows.size());
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == arrows.size()) {
          auto key = std::make_pair(c, entries);
          if (!u.class_of_sig.count(key)) fresh.push_back(key);
          return;
        }
        // enumerate subsets of candidates[i] with incremental checks
        // against already-fixed slots
        std::function<void(std::size_t)> pick = [&](std::size_t j) {
          if (j == candidates[i].size()) {
            // naturality between slot i and every fixed slot (both ways)
            for (std::size_t j2 = 0; j2 <= i; ++j2) {
              int f2 = arrows[j2];
              for (int g : cat.arrows_into[cat.dom(f2)]) {
                int f2g = cat.table[f2][g];
                auto sl = std::find(arrows.begin(), arrows.end(), f2g) - arrows.begin();
                if (static_cast<std::size_t>(sl) > i) continue;  // not fixed yet
                for (int m : entries[j2])
                  if (!std::binary_search(entries[sl].begin(), entries[sl].end(),
                                          u.restrict_class(m, g)))
                    return;
              }
            }
            rec(i + 1);
            return;
          }
          pick(j + 1);  // without candidate j
          entries[i].push_back(candidates[i][j]);
          pick(j + 1);  // with candidate j
          entries[i].pop_back();
        };
        pick(0);
        entries[i].clear();
      };
      rec(0);
      if (static_cast<int>(u.class_of_sig.size() + fresh.size()) > kCarrierCap)
        throw Error("CarrierCap", "universe exceeded the desk-scale cap");
    }

    std::sort(fresh.begin(), fresh.end());
    int before = static_cast<int>(u.classes.size());
    std::vector<int> assigned(fresh.size(), -1);
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      auto& [c, sig] = fresh[i];
      for (int k = 0; k < before && assigned[i] < 0; ++k)
        if (u.classes[k].at == c && class_sig_bisim(u, c, sig, u.classes[k].entries))
          assigned[i] = k;
      for (std::size_t j = 0; j < i && assigned[i] < 0; ++j)
        if (fresh[j].first == c && class_sig_bisim(u, c, sig, fresh[j].second))
          assigned[i] = assigned[j];
      if (assigned[i] < 0) {
        assigned[i] = static_cast<int>(u.classes.size());
        u.classes.push_back(Universe::ClassInfo{c, sig, level - 1});
        u.res.emplace_back();
      }
      u.class_of_sig[fresh[i]] = assigned[i];
    }

    // restriction tables for all classes (new entries only)
    for (int k = 0; k < static_cast<int>(u.classes.size()); ++k) {
      int c = u.classes[k].at;
      const auto& arrows = cat.arrows_into[c];
      for (int arr : arrows) {
        if (u.res[k].count(arr)) continue;
        int d = cat.dom(arr);
        const auto& darrows = cat.arrows_into[d];
        std::vector<std::vector<int>> rsig(darrows.size());
        for (std::size_t i = 0; i < darrows.size(); ++i) {
          int fg = cat.table[arr][darrows[i]];
          auto sl = std::find(arrows.begin(), arrows.end(), fg) - arrows.begin();
          rsig[i] = u.classes[k].entries[sl];
        }
        auto it = u.class_of_sig.find(std::make_pair(d, rsig));
        if (it == u.class_of_sig.end())
          throw Error("ShapeMismatch", "restricted name signature was never enumerated");
        u.res[k][arr] = it->second;
      }
    }
    if (static_cast<int>(u.classes.size()) == before && level > 1) break;  // saturated
  }

  u.carrier.assign(cat.n_objects(), {});
  for (int k = 0; k < static_cast<int>(u.classes.size()); ++k)
    u.carrier[u.classes[k].at].push_back(k);
  u.dense_index.assign(cat.n_objects(), std::vector<int>(u.classes.size(), -1));
  for (int c = 0; c < cat.n_objects(); ++c)
    for (std::size_t i = 0; i < u.carrier[c].size(); ++i)
      u.dense_index[c][u.carrier[c][i]] = static_cast<int>(i);

  // membership: [v] ε [sup t] ⇔ { f : v·f ∈ t(f) } covers the stage
  u.mem.assign(cat.n_objects(), {});
  for (int c = 0; c < cat.n_objects(); ++c) {
    const auto& arrows = cat.arrows_into[c];
    u.mem[c].assign(u.carrier[c].size(), Bitset(static_cast<int>(u.carrier[c].size())));
    for (std::size_t j = 0; j < u.carrier[c].size(); ++j) {
      const auto& sig = u.classes[u.carrier[c][j]].entries;
      for (std::size_t i = 0; i < u.carrier[c].size(); ++i) {
        Bitset sieve(cat.n_arrows());
        for (std::size_t s = 0; s < arrows.size(); ++s) {
          int vf = u.restrict_class(u.carrier[c][i], arrows[s]);
          if (std::binary_search(sig[s].begin(), sig[s].end(), vf)) sieve.set(arrows[s]);
        }
        if (top.covers(c, sieve)) u.mem[c][j].set(static_cast<int>(i));
      }
    }
  }
  return u;
}

int universe_class_of(const Universe& u, NameStore& store, int name) {
  const auto& n = store.node(name);
  if (n.rank >= u.rank_bound) throw Error("UnknownLiteral", "name exceeds the universe rank");
  std::vector<std::vector<int>> sig(n.entries.size());
  for (std::size_t i = 0; i < n.entries.size(); ++i)
    for (int m : n.entries[i]) sig[i].push_back(universe_class_of(u, store, m));
  return u.lookup(n.at, sig);
}

}  // namespace sheafkit
