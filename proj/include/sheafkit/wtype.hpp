#pragma once

#include <map>
#include <memory>

#include "sheafkit/heyting.hpp"
#include "sheafkit/presheaf.hpp"
#include "sheafkit/topology.hpp"

namespace sheafkit {

// One application of the polynomial functor of a small F: Y→X:
// P_F(Z)(a) = { (x ∈ X(a), t: Y^M_x → Z natural) }, restriction
// (x, t)·f = (x·f, f*t) with (f*t)(g, y) = t(fg, y).
struct PolyApply {
  Presheaf psh;
  // decode[a][i] = (x, values of t in the flat order of m_fiber(F, a, x))
  std::vector<std::vector<std::pair<int, std::vector<int>>>> decode;
};

PolyApply poly_apply(const PresheafMorphism& f, const Presheaf& z, const SmallnessClass& cls);

// Well-founded trees for the presheaf W-type of F: nodes carry (a, x ∈ X(a))
// and one child per matching pair (f, y) ∈ Y^M_x; children of a node rooted
// at dom f. Trees are interned; ids are stable within one store.
class PshTreeStore {
public:
  struct Node {
    int at, x;
    std::vector<int> child;  // parallel to the flat fiber order
    int height;              // leaf = 1
  };

  explicit PshTreeStore(const PresheafMorphism& f);

  const PresheafMorphism& morphism() const { return f_; }
  const Node& node(int v) const { return nodes_[v]; }
  int size() const { return static_cast<int>(nodes_.size()); }

  // flat matching pairs (b, arrow, y) of Y^M_x, deterministic order
  const std::vector<std::tuple<int, int, int>>& fiber(int a, int x) const {
    return fibers_[a][x];
  }

  int intern(int a, int x, const std::vector<int>& child);
  int restrict_tree(int v, int arrow);  // v·f by reindexing
  // root-level naturality: t(f,y)·g = t(fg, y·g); children are assumed
  // hereditarily natural, so this is the full condition
  bool natural(int v);

private:
  PresheafMorphism f_;
  std::vector<std::vector<std::vector<std::tuple<int, int, int>>>> fibers_;
  std::vector<Node> nodes_;
  std::map<std::tuple<int, int, std::vector<int>>, int> index_;
  std::map<std::pair<int, int>, int> restrict_memo_;
};

struct PresheafWType {
  std::shared_ptr<PshTreeStore> store;
  std::vector<std::vector<int>> carrier;  // per object: tree ids, sorted
  Presheaf psh;                           // carrier as a presheaf
  std::vector<std::vector<int>> elem_of_tree;  // [a]: tree id → dense index
  std::vector<std::vector<int>> sizes_per_height;  // [height][object]
  bool stabilized = false;
  int depth = 0;

  int dense_index(int a, int tree) const;
};

// Hereditarily natural trees of height ≤ depth; stabilized when the carrier
// no longer grows between consecutive heights (then it is the W-type).
PresheafWType presheaf_wtype(const PresheafMorphism& f, int depth, const SmallnessClass& cls);

// Sheaf W-type, built on bisimulation classes: a class is recorded by its
// canonical signature (a, x, covering sieve S, one class per matching pair
// in Y^S_x — naturality makes every child set of a natural tree mono-class).
struct ShfWType {
  struct Sig {
    int at, x;
    Bitset sieve;
    std::vector<int> child;  // class per flat pair of the sieved fiber

    friend bool operator<(const Sig& a, const Sig& b) {
      if (a.at != b.at) return a.at < b.at;
      if (a.x != b.x) return a.x < b.x;
      if (!(a.sieve == b.sieve)) return a.sieve < b.sieve;
      return a.child < b.child;
    }
    friend bool operator==(const Sig& a, const Sig& b) {
      return a.at == b.at && a.x == b.x && a.sieve == b.sieve && a.child == b.child;
    }
  };

  PresheafMorphism f;
  Topology top;
  std::vector<Sig> sig;                    // canonical signature per class
  std::vector<int> first_level;            // level at which each class appeared
  std::map<Sig, int> class_of_sig;         // every enumerated signature
  std::vector<std::map<int, int>> res;     // class × arrow → class
  std::vector<std::vector<int>> carrier;   // per object: class ids (sorted)
  Presheaf psh;
  std::vector<std::vector<int>> elem_of_class;  // [a]: class → dense index
  std::vector<std::vector<int>> sizes_per_height;  // [height][object]
  bool stabilized = false;
  int depth = 0;

  int dense_index(int a, int cls) const;
  // flat pairs (b, arrow, y) of the sieved fiber of a signature
  std::vector<std::tuple<int, int, int>> sieved_flat(int a, int x, const Bitset& s) const;
  int restrict_class(int cls, int arrow) const;
};

// Throws NotSmall / NotASheaf on bad inputs; carriers are quotients by ~.
// Stabilization is read on the quotient carrier.
ShfWType sheaf_wtype(const PresheafMorphism& f, const Topology& top, int depth,
                     const SmallnessClass& cls);

struct AlgebraReport {
  bool sup_total = false;           // every P_F(W) element lands in the carrier
  bool sup_monic = false;
  bool no_proper_subalgebra = false;
  std::string detail;

  bool ok() const { return sup_total && sup_monic && no_proper_subalgebra; }
};

// Verifies that sup: P_F(W) → W is well defined and monic and that the least
// subobject closed under sup (and restriction, and locality in the sheaf
// case) is the whole carrier. Requires a stabilized W-type.
AlgebraReport check_initial_algebra(const PresheafWType& w);
AlgebraReport check_initial_algebra(const ShfWType& w);

}  // namespace sheafkit
