#pragma once

#include <optional>

#include "sheafkit/bitset.hpp"
#include "sheafkit/category.hpp"

namespace sheafkit {

// A sieve on an object: a set of arrows with that codomain, closed under
// precomposition. The arrow set is a bitset over the whole arrow index space;
// bits outside arrows_into(at) are never set.
struct Sieve {
  int at = -1;
  Bitset arrows;
};

Sieve max_sieve(const FiniteCategory& cat, int at);
Sieve empty_sieve(const FiniteCategory& cat, int at);

// The least sieve containing f (all fg).
Sieve principal_sieve(const FiniteCategory& cat, int f);

// Returns an offending (f, g) with f ∈ S, fg ∉ S if S is not closed.
std::optional<std::pair<int, int>> sieve_closure_witness(const FiniteCategory& cat,
                                                         int at, const Bitset& arrows);
bool is_sieve(const FiniteCategory& cat, int at, const Bitset& arrows);

// f^*S = { g : fg ∈ S } for f: b→a, S a sieve on a. Throws CodomainMismatch.
Sieve pullback_sieve(const FiniteCategory& cat, const Sieve& s, int f);

// Every sieve on `at`, in increasing Bitset order. Sieves are exactly the
// unions of principal sieves, so the lattice is enumerated by closing the
// empty sieve under unions with principal ones.
std::vector<Bitset> all_sieves(const FiniteCategory& cat, int at);

// A presentation: basic covers per object; generates by superset closure.
struct Presentation {
  std::vector<std::vector<Bitset>> bcov;
};

// A Grothendieck topology stored extensionally: cov[a] lists every covering
// sieve on a, sorted. Instances are produced by the validators/constructors
// below, so the axioms may be assumed downstream. When the topology was
// generated from a basis, the presentation is kept for provenance.
struct Topology {
  const FiniteCategory* cat = nullptr;
  std::vector<std::vector<Bitset>> cov;
  std::optional<Presentation> presentation;

  bool covers(int at, const Bitset& sieve) const;
  bool empty_covers(int at) const;  // ∅ ∈ Cov(at)
};

struct TopologyValidation {
  std::optional<Topology> topology;
  std::vector<Issue> issues;
  bool ok() const { return issues.empty(); }
};

// Checks the sieve invariant plus maximality, stability and local character
// (local character by exhaustive quantification over the sieve lattice).
TopologyValidation validate_topology(const FiniteCategory& cat,
                                     const std::vector<std::vector<Bitset>>& cov);

// Cov(a) = { M_a } everywhere.
Topology trivial_topology(const FiniteCategory& cat);

// On a poset category: S covers p iff S is dense below p, i.e. for every
// q ≤ p there is r ≤ q with (r→p) ∈ S. Throws NotAPoset.
Topology dense_topology(const FiniteCategory& cat);

// Cov(a) = { S sieve on a : ∃R ∈ BCov(a), R ⊆ S }. The generated family is
// validated; on failure throws Error("GeneratedFamilyNotATopology") with the
// first axiom witness in the message.
Topology generate_topology(const FiniteCategory& cat, const Presentation& pres);

}  // namespace sheafkit
