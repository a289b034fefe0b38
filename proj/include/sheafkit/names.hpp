#pragma once

#include <map>
#include <memory>

#include "sheafkit/topology.hpp"

namespace sheafkit {

// Raw set-theoretic names over a site: well-founded trees sup_c t with one
// finite set of names per arrow into c, composable (members of t(f: d→c) are
// rooted at d) and natural (v ∈ t(f) ⇒ v·g ∈ t(fg)). Interned per store;
// entry sets are sorted id vectors.
class NameStore {
public:
  struct Node {
    int at;
    std::vector<std::vector<int>> entries;  // parallel to arrows_into[at]
    int rank;                               // ∅-name has rank 0
  };

  explicit NameStore(const FiniteCategory& cat) : cat_(&cat) {}

  const FiniteCategory& category() const { return *cat_; }
  const Node& node(int v) const { return nodes_[v]; }
  int size() const { return static_cast<int>(nodes_.size()); }

  // `entries` indexed parallel to arrows_into[at]; members deduplicated and
  // sorted on interning. Composability is enforced; naturality is not (use
  // natural()).
  int intern(int at, std::vector<std::vector<int>> entries);
  int empty_name(int at);
  int restrict_name(int v, int arrow);  // sup_c t · f = sup_d t(f∘−)
  bool natural(int v);                  // v ∈ t(f), g ⇒ v·g ∈ t(fg)
  bool hereditarily_natural(int v);

  // position of `arrow` inside arrows_into[at]
  int slot(int at, int arrow) const;

private:
  const FiniteCategory* cat_;
  std::vector<Node> nodes_;
  std::map<std::pair<int, std::vector<std::vector<int>>>, int> index_;
  std::map<std::pair<int, int>, int> restrict_memo_;
  std::map<int, int> natural_memo_;
};

// The bisimulation of the sheaf names model, computed directly by recursion:
// sup_c t ~ sup_c t' iff for every f: d→c and v ∈ t(f) the sieve
// { g : ∃v' ∈ t'(fg), v·g ~ v' } covers d, and symmetrically. Throws
// RootMismatch when the roots differ.
bool names_equiv(NameStore& store, const Topology& top, int v, int w);

// The rank-bounded universe of the forcing model: all composable+natural
// names of rank < rank_bound, quotiented by ~. Carriers are stored at class
// level: a class records its object and its entry signature (sets of
// lower-rank classes per arrow); canonical representative = least signature.
struct Universe {
  const FiniteCategory* cat = nullptr;
  Topology top;
  int rank_bound = 0;

  struct ClassInfo {
    int at;
    std::vector<std::vector<int>> entries;  // canonical signature
    int rank;                               // first level of appearance - 1
  };
  std::vector<ClassInfo> classes;
  std::map<std::pair<int, std::vector<std::vector<int>>>, int> class_of_sig;
  std::vector<std::map<int, int>> res;       // class × arrow → class
  std::vector<std::vector<int>> carrier;     // per object: class ids, sorted
  std::vector<std::vector<Bitset>> mem;      // per object: mem[j] ⊇ {i : i ε j}
  std::vector<std::vector<int>> dense_index; // class → position in carrier[at]

  int restrict_class(int cls, int arrow) const;
  bool forced_mem(int i, int j) const;  // classes at the same object
  bool empty_covered(int at) const { return top.empty_covers(at); }
  // class of an entry signature (UnknownLiteral if absent)
  int lookup(int at, const std::vector<std::vector<int>>& entries) const;
  // readable form of the canonical representative, e.g. "{id: {…}, u: {…}}";
  // on posets entry sets that are forced by naturality are elided.
  std::string describe(int cls) const;
};

Universe build_universe(const FiniteCategory& cat, const Topology& top, int rank_bound);

// Class of a raw name in the universe (it must be composable, natural and of
// rank < rank_bound). Used by oracles and the CLI.
int universe_class_of(const Universe& u, NameStore& store, int name);

}  // namespace sheafkit
