#pragma once

#include <optional>

#include "sheafkit/presheaf.hpp"
#include "sheafkit/topology.hpp"

namespace sheafkit {

// A compatible family on an object: a covering sieve R together with a
// choice x_f ∈ P(dom f) for every f ∈ R such that (x_f)·g = x_{fg}.
// `choice` is indexed parallel to sieve.elements().
struct CompatibleFamily {
  int at = -1;
  Bitset sieve;
  std::vector<int> choice;

  int value_at(const Bitset& s, int arrow) const;  // lookup by arrow id
  friend bool operator==(const CompatibleFamily& a, const CompatibleFamily& b) {
    return a.at == b.at && a.sieve == b.sieve && a.choice == b.choice;
  }
  friend bool operator<(const CompatibleFamily& a, const CompatibleFamily& b) {
    if (a.sieve == b.sieve) return a.choice < b.choice;
    return a.sieve < b.sieve;
  }
};

// All compatible families of P on `at`, over every covering sieve of the
// topology, in deterministic order.
std::vector<CompatibleFamily> compatible_families(const Presheaf& p, const Topology& top,
                                                  int at);

// The plus construction: Comp(P) / (agreement on a common covering
// refinement), with the restriction (R, x)·f = (f*R, x·f). Also carries the
// canonical map P → P⁺ (p ↦ class of the maximal-sieve family of p).
struct PlusConstruction {
  Presheaf plus;                                        // P⁺
  std::vector<std::vector<CompatibleFamily>> families;  // per object
  std::vector<std::vector<int>> class_of;               // [a][family] → element of P⁺(a)
  PresheafMorphism unit;                                // P → P⁺

  int class_of_family(int at, const CompatibleFamily& fam) const;
};

PlusConstruction plus(const Presheaf& p, const Topology& top);

struct Sheafification {
  Presheaf sheaf;          // P⁺⁺
  PresheafMorphism unit;   // P → P⁺⁺
  PlusConstruction first;  // P → P⁺
  PlusConstruction second; // P⁺ → P⁺⁺
};

Sheafification sheafify(const Presheaf& p, const Topology& top);

// Exhaustive check of the universal property against one sheaf target:
// every morphism P → G factors through the unit by exactly one morphism
// P⁺⁺ → G.
bool unique_factorization(const Sheafification& sh, const Presheaf& g);

// Separatedness: two elements agreeing on a cover are equal.
struct SeparatedFailure {
  int at;
  Bitset sieve;
  int x, y;
};
std::optional<SeparatedFailure> separated_witness(const Presheaf& p, const Topology& top);
inline bool is_separated(const Presheaf& p, const Topology& top) {
  return !separated_witness(p, top).has_value();
}

// Sheaf condition: separated and every compatible family glues.
struct SheafFailure {
  bool separation_failed = false;
  std::optional<SeparatedFailure> separation;
  std::optional<CompatibleFamily> unglued;
};
std::optional<SheafFailure> sheaf_witness(const Presheaf& p, const Topology& top);
inline bool is_sheaf(const Presheaf& p, const Topology& top) {
  return !sheaf_witness(p, top).has_value();
}

// Local surjectivity of F: Y→X: every x ∈ X(a) is hit after restriction
// along some covering sieve.
struct LocalSurjFailure {
  int at, x;
  Bitset best_sieve;  // the maximal sieve of arrows along which x is hit
};
std::optional<LocalSurjFailure> locally_surjective_witness(const PresheafMorphism& f,
                                                           const Topology& top);
inline bool is_locally_surjective(const PresheafMorphism& f, const Topology& top) {
  return !locally_surjective_witness(f, top).has_value();
}

}  // namespace sheafkit
