#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sheafkit {

// Errors thrown by operations whose preconditions are violated. `code` holds
// a stable machine-readable tag ("UnknownObject", "CodomainMismatch", ...).
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

// One finding of a validator; validators collect every violation they see.
struct Issue {
  std::string code;    // MissingIdentity, NonAssociative, ...
  std::string detail;  // human-readable witness
};

struct ArrowDecl {
  std::string name;
  std::string dom;
  std::string cod;
};

// Unvalidated category description, as read from a site file.
struct RawCategory {
  std::vector<std::string> objects;
  std::vector<ArrowDecl> arrows;
  // identities[i] = arrow name of id on objects[i]; may be inferred when an
  // arrow is the unique endo that the compose table treats as neutral, but
  // site files are expected to be explicit.
  std::vector<std::string> identities;
  // compose entries (g, f, gf) by arrow name, required for every composable
  // pair; identity compositions may be omitted (they are forced).
  struct ComposeEntry {
    std::string g, f, gf;
  };
  std::vector<ComposeEntry> compose;
};

// A finite category with interned objects and arrows. Objects and arrows are
// dense integer indices in declaration order; every enumeration downstream
// follows index order, so runs are reproducible.
class FiniteCategory {
public:
  struct Arrow {
    std::string name;
    int dom = -1;
    int cod = -1;
  };

  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::vector<int> identity;                 // per object
  std::vector<std::vector<int>> table;       // table[g][f] = g∘f, -1 if not composable
  std::vector<std::vector<int>> arrows_into; // per object: { f : cod f = a }
  std::vector<std::vector<int>> arrows_from; // per object: { f : dom f = a }
  bool poset = false;                        // set by poset_as_category

  int n_objects() const { return static_cast<int>(objects.size()); }
  int n_arrows() const { return static_cast<int>(arrows.size()); }
  int dom(int f) const { return arrows[f].dom; }
  int cod(int f) const { return arrows[f].cod; }
  bool composable(int g, int f) const { return arrows[f].cod == arrows[g].dom; }

  // g∘f for f: a→b, g: b→c.
  int compose(int g, int f) const {
    if (!composable(g, f))
      throw Error("NotComposable",
                  "compose(" + arrows[g].name + ", " + arrows[f].name + ")");
    return table[g][f];
  }

  int object_index(std::string_view name) const {
    for (int i = 0; i < n_objects(); ++i)
      if (objects[i] == name) return i;
    return -1;
  }
  int arrow_index(std::string_view name) const {
    for (int i = 0; i < n_arrows(); ++i)
      if (arrows[i].name == name) return i;
    return -1;
  }

  void rebuild_indexes();
};

struct CategoryValidation {
  std::optional<FiniteCategory> category;  // present iff issues is empty
  std::vector<Issue> issues;
  bool ok() const { return issues.empty(); }
};

// Checks identity laws, totality of composition on exactly the composable
// pairs, endpoint consistency and associativity on every composable triple.
CategoryValidation validate_category(const RawCategory& raw);

// Re-runs the exhaustive law check on an already-built category (used by
// generators and tests).
std::vector<Issue> check_category_laws(const FiniteCategory& cat);

// The category of a finite poset: one arrow q→p for each q ≤ p. `leq` lists
// the related pairs (q, p); reflexive pairs may be omitted.  Throws
// Error("NotAPartialOrder") naming a witnessing pair if the closure is not
// reflexive/antisymmetric/transitive.
FiniteCategory poset_as_category(const std::vector<std::string>& elements,
                                 const std::vector<std::pair<std::string, std::string>>& leq);

}  // namespace sheafkit
