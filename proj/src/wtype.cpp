#include "sheafkit/wtype.hpp"

#include "sheafkit/sheaf.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace sheafkit {

namespace {

constexpr int kCarrierCap = 200000;

std::vector<std::tuple<int, int, int>> flatten_fiber(const SievedFiber& fib, int n_objects) {
  std::vector<std::tuple<int, int, int>> flat;
  for (int b = 0; b < n_objects; ++b)
    for (auto [arr, y] : fib.elems[b]) flat.emplace_back(b, arr, y);
  return flat;
}

}  // namespace

PolyApply poly_apply(const PresheafMorphism& f, const Presheaf& z, const SmallnessClass& cls) {
  if (!pointwise_small(f, cls)) throw Error("NotSmall", "poly_apply needs a small map");
  const auto& cat = *f.src.cat;
  const Presheaf& x = f.dst;
  PolyApply out;
  out.decode.assign(cat.n_objects(), {});

  std::vector<std::vector<std::vector<std::tuple<int, int, int>>>> flats(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) {
    flats[a].resize(x.fib[a]);
    for (int xi = 0; xi < x.fib[a]; ++xi) {
      flats[a][xi] = flatten_fiber(m_fiber(f, a, xi), cat.n_objects());
      const auto& flat = flats[a][xi];
      std::vector<int> t(flat.size(), -1);
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == flat.size()) {
          out.decode[a].emplace_back(xi, t);
          return;
        }
        auto [bb, arr, y] = flat[i];
        for (int v = 0; v < z.fib[bb]; ++v) {
          t[i] = v;
          bool ok = true;
          for (std::size_t j = 0; j <= i && ok; ++j) {
            auto [bj, arrj, yj] = flat[j];
            // t(arrj, yj)·h = t(arrj∘h, yj·h) whenever the target is slot i
            for (int h : cat.arrows_into[bj]) {
              if (cat.dom(h) != bb) continue;
              if (cat.table[arrj][h] == arr && f.src.restrict(yj, h) == y &&
                  z.restrict(t[j], h) != v) {
                ok = false;
                break;
              }
            }
            if (!ok) break;
            for (int h : cat.arrows_into[bb]) {
              if (cat.dom(h) != bj) continue;
              if (cat.table[arr][h] == arrj && f.src.restrict(y, h) == yj &&
                  z.restrict(v, h) != t[j]) {
                ok = false;
                break;
              }
            }
          }
          if (ok) rec(i + 1);
          t[i] = -1;
        }
      };
      rec(0);
    }
  }

  Presheaf p;
  p.cat = &cat;
  p.fib.assign(cat.n_objects(), 0);
  for (int a = 0; a < cat.n_objects(); ++a)
    p.fib[a] = static_cast<int>(out.decode[a].size());
  p.act.assign(cat.n_arrows(), {});
  auto locate = [&](int a, int xi, const std::vector<int>& t) {
    for (std::size_t i = 0; i < out.decode[a].size(); ++i)
      if (out.decode[a][i].first == xi && out.decode[a][i].second == t)
        return static_cast<int>(i);
    throw Error("ShapeMismatch", "poly_apply restriction fell outside the carrier");
  };
  for (int arr = 0; arr < cat.n_arrows(); ++arr) {
    int a = cat.cod(arr), d = cat.dom(arr);
    p.act[arr].resize(p.fib[a]);
    for (int i = 0; i < p.fib[a]; ++i) {
      auto& [xi, t] = out.decode[a][i];
      int xd = x.restrict(xi, arr);
      const auto& dst_flat = flats[d][xd];
      const auto& src_flat = flats[a][xi];
      std::vector<int> rt(dst_flat.size());
      for (std::size_t j = 0; j < dst_flat.size(); ++j) {
        auto [bb, g, y] = dst_flat[j];
        auto pos = std::find(src_flat.begin(), src_flat.end(),
                             std::make_tuple(bb, cat.table[arr][g], y));
        rt[j] = t[pos - src_flat.begin()];
      }
      p.act[arr][i] = locate(d, xd, rt);
    }
  }
  out.psh = std::move(p);
  return out;
}

PshTreeStore::PshTreeStore(const PresheafMorphism& f) : f_(f) {
  const auto& cat = *f.src.cat;
  fibers_.resize(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) {
    fibers_[a].resize(f.dst.fib[a]);
    for (int x = 0; x < f.dst.fib[a]; ++x)
      fibers_[a][x] = flatten_fiber(m_fiber(f, a, x), cat.n_objects());
  }
}

int PshTreeStore::intern(int a, int x, const std::vector<int>& child) {
  auto key = std::make_tuple(a, x, child);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  int h = 1;
  for (int c : child) h = std::max(h, nodes_[c].height + 1);
  int id = static_cast<int>(nodes_.size());
  if (id >= kCarrierCap) throw Error("CarrierCap", "tree store exceeded the desk-scale cap");
  nodes_.push_back(Node{a, x, child, h});
  index_.emplace(std::move(key), id);
  return id;
}

int PshTreeStore::restrict_tree(int v, int arrow) {
  auto key = std::make_pair(v, arrow);
  auto it = restrict_memo_.find(key);
  if (it != restrict_memo_.end()) return it->second;
  const auto& cat = *f_.src.cat;
  const Node& n = nodes_[v];
  int d = cat.dom(arrow), xd = f_.dst.restrict(n.x, arrow);
  const auto& dst_flat = fibers_[d][xd];
  const auto& src_flat = fibers_[n.at][n.x];
  std::vector<int> child(dst_flat.size());
  for (std::size_t j = 0; j < dst_flat.size(); ++j) {
    auto [bb, g, y] = dst_flat[j];
    auto pos = std::find(src_flat.begin(), src_flat.end(),
                         std::make_tuple(bb, cat.table[arrow][g], y));
    child[j] = n.child[pos - src_flat.begin()];
  }
  int r = intern(d, xd, child);
  restrict_memo_.emplace(key, r);
  return r;
}

bool PshTreeStore::natural(int v) {
  const auto& cat = *f_.src.cat;
  const Node n = nodes_[v];
  const auto& flat = fibers_[n.at][n.x];
  for (std::size_t i = 0; i < flat.size(); ++i) {
    auto [b, arr, y] = flat[i];
    if (nodes_[n.child[i]].at != b) return false;  // composability
    for (int g : cat.arrows_into[b]) {
      auto pos = std::find(flat.begin(), flat.end(),
                           std::make_tuple(cat.dom(g), cat.table[arr][g],
                                           f_.src.restrict(y, g)));
      if (pos == flat.end()) return false;
      if (restrict_tree(n.child[i], g) != n.child[pos - flat.begin()]) return false;
    }
  }
  return true;
}

int PresheafWType::dense_index(int a, int tree) const {
  if (tree < 0 || tree >= static_cast<int>(elem_of_tree[a].size()) ||
      elem_of_tree[a][tree] < 0)
    throw Error("ElementNotInFiber", "tree not in the carrier");
  return elem_of_tree[a][tree];
}

PresheafWType presheaf_wtype(const PresheafMorphism& f, int depth, const SmallnessClass& cls) {
  if (!pointwise_small(f, cls)) throw Error("NotSmall", "presheaf_wtype needs a small map");
  if (depth < 1) throw Error("ShapeMismatch", "depth must be positive");
  const auto& cat = *f.src.cat;
  const Presheaf& x = f.dst;
  PresheafWType out;
  out.store = std::make_shared<PshTreeStore>(f);
  out.depth = depth;
  PshTreeStore& st = *out.store;

  // Trees of height ≤ depth, counting leaves as height 0: depth+1 rounds of
  // the children-from-previous-carrier construction. Stabilized iff the last
  // round added nothing (the carrier is then the genuine W-type).
  std::set<int> carrier;  // hereditarily natural trees so far
  std::vector<std::set<int>> rooted(cat.n_objects());
  std::set<int> prev;
  for (int level = 1; level <= depth + 1; ++level) {
    std::set<int> next = carrier;
    for (int a = 0; a < cat.n_objects(); ++a)
      for (int xi = 0; xi < x.fib[a]; ++xi) {
        const auto& flat = st.fiber(a, xi);
        std::vector<int> child(flat.size(), -1);
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
          if (i == flat.size()) {
            int v = st.intern(a, xi, child);
            if (st.natural(v)) next.insert(v);
            return;
          }
          auto [b, arr, y] = flat[i];
          (void)arr;
          (void)y;
          for (int t : rooted[b]) {
            child[i] = t;
            rec(i + 1);
          }
          child[i] = -1;
        };
        rec(0);
      }
    prev = carrier;
    carrier = next;
    rooted.assign(cat.n_objects(), {});
    for (int v : carrier) rooted[st.node(v).at].insert(v);
    std::vector<int> sizes(cat.n_objects(), 0);
    for (int v : carrier) ++sizes[st.node(v).at];
    out.sizes_per_height.push_back(std::move(sizes));
    out.stabilized = (carrier == prev);
    if (out.stabilized) break;  // further rounds cannot add anything
  }

  out.carrier.assign(cat.n_objects(), {});
  for (int v : carrier) out.carrier[st.node(v).at].push_back(v);
  for (auto& c : out.carrier) std::sort(c.begin(), c.end());

  out.elem_of_tree.assign(cat.n_objects(), {});
  Presheaf p;
  p.cat = &cat;
  p.fib.assign(cat.n_objects(), 0);
  for (int a = 0; a < cat.n_objects(); ++a) {
    p.fib[a] = static_cast<int>(out.carrier[a].size());
    out.elem_of_tree[a].assign(st.size(), -1);
    for (int i = 0; i < p.fib[a]; ++i) out.elem_of_tree[a][out.carrier[a][i]] = i;
  }
  p.act.assign(cat.n_arrows(), {});
  for (int arr = 0; arr < cat.n_arrows(); ++arr) {
    int a = cat.cod(arr);
    p.act[arr].resize(p.fib[a]);
    for (int i = 0; i < p.fib[a]; ++i) {
      int rv = st.restrict_tree(out.carrier[a][i], arr);
      int idx = rv < static_cast<int>(out.elem_of_tree[cat.dom(arr)].size())
                    ? out.elem_of_tree[cat.dom(arr)][rv]
                    : -1;
      if (idx < 0)
        throw Error("ShapeMismatch", "restriction left the hereditarily natural carrier");
      p.act[arr][i] = idx;
    }
  }
  out.psh = std::move(p);
  return out;
}

int ShfWType::dense_index(int a, int cls) const {
  if (cls < 0 || cls >= static_cast<int>(elem_of_class[a].size()) ||
      elem_of_class[a][cls] < 0)
    throw Error("ElementNotInFiber", "class not in the carrier");
  return elem_of_class[a][cls];
}

std::vector<std::tuple<int, int, int>> ShfWType::sieved_flat(int a, int x,
                                                             const Bitset& s) const {
  return flatten_fiber(sieved_fiber(f, a, x, s), f.src.cat->n_objects());
}

int ShfWType::restrict_class(int cls, int arrow) const {
  auto it = res[cls].find(arrow);
  if (it == res[cls].end()) throw Error("CodomainMismatch", "restriction along a non-incoming arrow");
  return it->second;
}

namespace {

// one-step bisimulation on signatures whose children are fully quotiented
bool sig_bisim(const ShfWType& w, const Topology& top, const ShfWType::Sig& a,
               const ShfWType::Sig& b) {
  if (a.at != b.at || a.x != b.x) return false;
  Bitset inter = a.sieve & b.sieve;
  auto flat_a = w.sieved_flat(a.at, a.x, a.sieve);
  auto flat_b = w.sieved_flat(b.at, b.x, b.sieve);
  for (const auto& r : top.cov[a.at]) {
    if (!r.subset_of(inter)) continue;
    bool ok = true;
    for (std::size_t i = 0; i < flat_a.size() && ok; ++i) {
      auto [bb, arr, y] = flat_a[i];
      if (!r.test(arr)) continue;
      auto pos = std::find(flat_b.begin(), flat_b.end(), flat_a[i]);
      if (a.child[i] != b.child[pos - flat_b.begin()]) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

ShfWType sheaf_wtype(const PresheafMorphism& f, const Topology& top, int depth,
                     const SmallnessClass& cls) {
  if (!pointwise_small(f, cls)) throw Error("NotSmall", "sheaf_wtype needs a small map");
  if (depth < 1) throw Error("ShapeMismatch", "depth must be positive");
  if (!is_sheaf(f.dst, top) || !is_sheaf(f.src, top))
    throw Error("NotASheaf", "sheaf_wtype needs sheaves on both ends");
  const auto& cat = *f.src.cat;
  const Presheaf& x = f.dst;

  ShfWType out;
  out.f = f;
  out.top = top;
  out.depth = depth;

  // As in the presheaf case, leaves count as height 0, so run depth+1
  // rounds; stabilized iff the last round created no new class.
  int last_new_level = 0;
  for (int level = 1; level <= depth + 1; ++level) {
    // enumerate all signatures over the current classes
    std::vector<ShfWType::Sig> fresh;
    for (int a = 0; a < cat.n_objects(); ++a)
      for (int xi = 0; xi < x.fib[a]; ++xi)
        for (const auto& sieve : top.cov[a]) {
          auto flat = out.sieved_flat(a, xi, sieve);
          std::vector<int> child(flat.size(), -1);
          std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == flat.size()) {
              ShfWType::Sig s{a, xi, sieve, child};
              if (!out.class_of_sig.count(s)) fresh.push_back(s);
              return;
            }
            auto [b, arr, y] = flat[i];
            for (int cand = 0; cand < static_cast<int>(out.sig.size()); ++cand) {
              if (out.sig[cand].at != b) continue;
              child[i] = cand;
              // class-level naturality against assigned slots (both ways)
              bool ok = true;
              for (std::size_t j = 0; j <= i && ok; ++j) {
                auto [bj, arrj, yj] = flat[j];
                for (int h : cat.arrows_into[bj]) {
                  if (cat.dom(h) != b) continue;
                  if (cat.table[arrj][h] == arr && f.src.restrict(yj, h) == y &&
                      out.restrict_class(child[j], h) != cand) {
                    ok = false;
                    break;
                  }
                }
                if (!ok) break;
                for (int h : cat.arrows_into[b]) {
                  if (cat.dom(h) != bj) continue;
                  if (cat.table[arr][h] == arrj && f.src.restrict(y, h) == yj &&
                      out.restrict_class(cand, h) != child[j]) {
                    ok = false;
                    break;
                  }
                }
              }
              if (ok) rec(i + 1);
            }
            child[i] = -1;
          };
          rec(0);
          if (static_cast<int>(out.class_of_sig.size() + fresh.size()) > kCarrierCap)
            throw Error("CarrierCap", "sheaf W-type carrier exceeded the desk-scale cap");
        }

    // quotient the fresh signatures against existing classes and each other
    std::sort(fresh.begin(), fresh.end());
    std::vector<int> assigned(fresh.size(), -1);
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      for (int c = 0; c < static_cast<int>(out.sig.size()) && assigned[i] < 0; ++c)
        if (sig_bisim(out, top, fresh[i], out.sig[c])) assigned[i] = c;
      for (std::size_t j = 0; j < i && assigned[i] < 0; ++j)
        if (sig_bisim(out, top, fresh[i], fresh[j])) assigned[i] = assigned[j];
      if (assigned[i] < 0) {
        assigned[i] = static_cast<int>(out.sig.size());
        out.sig.push_back(fresh[i]);
        out.first_level.push_back(level);
        out.res.emplace_back();
        last_new_level = level;
      }
      out.class_of_sig[fresh[i]] = assigned[i];
    }
    // transitivity sanity check within the fresh batch
    for (std::size_t i = 0; i < fresh.size(); ++i)
      for (std::size_t j = i + 1; j < fresh.size(); ++j)
        if (sig_bisim(out, top, fresh[i], fresh[j]) != (assigned[i] == assigned[j]))
          throw Error("ShapeMismatch", "tree bisimulation is not transitive");

    // restriction tables for the new classes (and any still-missing entries)
    for (int c = 0; c < static_cast<int>(out.sig.size()); ++c) {
      const auto& s = out.sig[c];
      for (int arr : cat.arrows_into[s.at]) {
        if (out.res[c].count(arr)) continue;
        auto flat_src = out.sieved_flat(s.at, s.x, s.sieve);
        Bitset ps = pullback_sieve(cat, Sieve{s.at, s.sieve}, arr).arrows;
        auto flat_dst = out.sieved_flat(cat.dom(arr), x.restrict(s.x, arr), ps);
        ShfWType::Sig rs;
        rs.at = cat.dom(arr);
        rs.x = x.restrict(s.x, arr);
        rs.sieve = ps;
        rs.child.resize(flat_dst.size());
        for (std::size_t j = 0; j < flat_dst.size(); ++j) {
          auto [bb, g, y] = flat_dst[j];
          auto pos = std::find(flat_src.begin(), flat_src.end(),
                               std::make_tuple(bb, cat.table[arr][g], y));
          rs.child[j] = s.child[pos - flat_src.begin()];
        }
        auto it = out.class_of_sig.find(rs);
        if (it == out.class_of_sig.end())
          throw Error("ShapeMismatch", "restricted signature was never enumerated");
        out.res[c][arr] = it->second;
      }
    }
    {
      std::vector<int> sizes(cat.n_objects(), 0);
      for (int c2 = 0; c2 < static_cast<int>(out.sig.size()); ++c2)
        ++sizes[out.sig[c2].at];
      out.sizes_per_height.push_back(std::move(sizes));
    }
    out.stabilized = (last_new_level < level);
    if (out.stabilized) break;  // nothing new can appear later
  }

  out.carrier.assign(cat.n_objects(), {});
  for (int c = 0; c < static_cast<int>(out.sig.size()); ++c)
    out.carrier[out.sig[c].at].push_back(c);
  out.elem_of_class.assign(cat.n_objects(), {});
  Presheaf p;
  p.cat = &cat;
  p.fib.assign(cat.n_objects(), 0);
  for (int a = 0; a < cat.n_objects(); ++a) {
    p.fib[a] = static_cast<int>(out.carrier[a].size());
    out.elem_of_class[a].assign(out.sig.size(), -1);
    for (int i = 0; i < p.fib[a]; ++i) out.elem_of_class[a][out.carrier[a][i]] = i;
  }
  p.act.assign(cat.n_arrows(), {});
  for (int arr = 0; arr < cat.n_arrows(); ++arr) {
    int a = cat.cod(arr);
    p.act[arr].resize(p.fib[a]);
    for (int i = 0; i < p.fib[a]; ++i)
      p.act[arr][i] = out.elem_of_class[cat.dom(arr)][out.restrict_class(out.carrier[a][i], arr)];
  }
  out.psh = std::move(p);
  return out;
}

AlgebraReport check_initial_algebra(const PresheafWType& w) {
  AlgebraReport rep;
  if (!w.stabilized) throw Error("NotStabilized", "W-type was truncated; no algebra check");
  const auto& cat = *w.store->morphism().src.cat;
  const Presheaf& x = w.store->morphism().dst;
  PshTreeStore& st = *w.store;

  // enumerate P_F(W): (x, natural t into the carrier), compute sup, check
  // totality and injectivity
  std::map<int, std::pair<int, std::vector<int>>> preimage;
  rep.sup_total = true;
  rep.sup_monic = true;
  for (int a = 0; a < cat.n_objects(); ++a)
    for (int xi = 0; xi < x.fib[a]; ++xi) {
      const auto& flat = st.fiber(a, xi);
      std::vector<int> child(flat.size(), -1);
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == flat.size()) {
          int v = st.intern(a, xi, child);
          if (!st.natural(v)) return;  // not an element of P_F(W)
          bool in_carrier = std::binary_search(w.carrier[a].begin(), w.carrier[a].end(), v);
          if (!in_carrier) {
            rep.sup_total = false;
            rep.detail = "sup image missing from the carrier";
          }
          auto [it, fresh] = preimage.emplace(v, std::make_pair(xi, child));
          if (!fresh && it->second != std::make_pair(xi, child)) rep.sup_monic = false;
          return;
        }
        auto [b, arr, y] = flat[i];
        (void)arr;
        (void)y;
        for (int t : w.carrier[b]) {
          child[i] = t;
          rec(i + 1);
        }
        child[i] = -1;
      };
      rec(0);
    }

  // least subpresheaf closed under sup: fixpoint from below
  std::set<int> closed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < cat.n_objects(); ++a)
      for (int v : w.carrier[a]) {
        if (closed.count(v)) continue;
        const auto& n = st.node(v);
        bool all_in = true;
        for (int c : n.child)
          if (!closed.count(c)) {
            all_in = false;
            break;
          }
        if (all_in) {
          closed.insert(v);
          changed = true;
        }
      }
    // restriction closure
    for (int a = 0; a < cat.n_objects(); ++a)
      for (int v : w.carrier[a]) {
        if (!closed.count(v)) continue;
        for (int arr : cat.arrows_into[a])
          if (cat.cod(arr) == a) {
            int rv = st.restrict_tree(v, arr);
            if (!closed.count(rv)) {
              closed.insert(rv);
              changed = true;
            }
          }
      }
  }
  std::size_t total = 0;
  for (auto& c : w.carrier) total += c.size();
  rep.no_proper_subalgebra = closed.size() == total;
  if (!rep.no_proper_subalgebra && rep.detail.empty())
    rep.detail = "sup-closure fixpoint is a proper subobject";
  return rep;
}

AlgebraReport check_initial_algebra(const ShfWType& w) {
  AlgebraReport rep;
  if (!w.stabilized) throw Error("NotStabilized", "W-type was truncated; no algebra check");
  const auto& cat = *w.f.src.cat;
  const Presheaf& x = w.f.dst;
  const Topology& top = w.top;

  rep.sup_total = true;
  rep.sup_monic = true;
  std::map<int, std::pair<int, std::vector<int>>> preimage;
  std::vector<std::pair<int, std::vector<int>>> sup_records;  // (class, children)
  for (int a = 0; a < cat.n_objects(); ++a) {
    Bitset m = max_sieve(cat, a).arrows;
    for (int xi = 0; xi < x.fib[a]; ++xi) {
      auto flat = w.sieved_flat(a, xi, m);
      std::vector<int> child(flat.size(), -1);
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == flat.size()) {
          ShfWType::Sig s{a, xi, m, child};
          auto it = w.class_of_sig.find(s);
          if (it == w.class_of_sig.end()) {
            rep.sup_total = false;
            rep.detail = "sup image missing from the carrier";
            return;
          }
          sup_records.emplace_back(it->second, child);
          auto [pit, fresh] = preimage.emplace(it->second, std::make_pair(xi, child));
          if (!fresh && pit->second != std::make_pair(xi, child)) rep.sup_monic = false;
          return;
        }
        auto [b, arr, y] = flat[i];
        for (int cand : w.carrier[b]) {
          child[i] = cand;
          // class-level naturality against assigned slots, both directions
          bool ok = true;
          for (std::size_t j = 0; j <= i && ok; ++j) {
            auto [bj, arrj, yj] = flat[j];
            for (int h : cat.arrows_into[bj]) {
              if (cat.dom(h) != b) continue;
              if (cat.table[arrj][h] == arr && w.f.src.restrict(yj, h) == y &&
                  w.restrict_class(child[j], h) != cand) {
                ok = false;
                break;
              }
            }
            if (!ok) break;
            for (int h : cat.arrows_into[b]) {
              if (cat.dom(h) != bj) continue;
              if (cat.table[arr][h] == arrj && w.f.src.restrict(y, h) == yj &&
                  w.restrict_class(cand, h) != child[j]) {
                ok = false;
                break;
              }
            }
          }
          if (ok) rec(i + 1);
        }
        child[i] = -1;
      };
      rec(0);
    }
  }

  // least subsheaf closed under sup: recorded sup-images, restriction
  // closure, and local character (a class whose restrictions along a cover
  // lie inside joins in)
  std::set<int> closed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [sup_class, children] : sup_records) {
      if (closed.count(sup_class)) continue;
      bool all_in = true;
      for (int ch : children)
        if (!closed.count(ch)) {
          all_in = false;
          break;
        }
      if (all_in) {
        closed.insert(sup_class);
        changed = true;
      }
    }
    for (int c = 0; c < static_cast<int>(w.sig.size()); ++c) {
      if (closed.count(c)) continue;
      Bitset inside(cat.n_arrows());
      for (int arr : cat.arrows_into[w.sig[c].at])
        if (closed.count(w.restrict_class(c, arr))) inside.set(arr);
      if (top.covers(w.sig[c].at, inside)) {
        closed.insert(c);
        changed = true;
      }
    }
    for (int c = 0; c < static_cast<int>(w.sig.size()); ++c) {
      if (!closed.count(c)) continue;
      for (auto [arr, rc] : w.res[c])
        if (!closed.count(rc)) {
          closed.insert(rc);
          changed = true;
        }
    }
  }
  rep.no_proper_subalgebra = closed.size() == w.sig.size();
  if (!rep.no_proper_subalgebra && rep.detail.empty())
    rep.detail = "sup/local closure fixpoint is a proper subobject";
  return rep;
}

}  // namespace sheafkit
