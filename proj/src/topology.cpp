#include "sheafkit/topology.hpp"

#include <algorithm>
#include <set>

namespace sheafkit {

Sieve max_sieve(const FiniteCategory& cat, int at) {
  if (at < 0 || at >= cat.n_objects()) throw Error("UnknownObject", std::to_string(at));
  Sieve s{at, Bitset(cat.n_arrows())};
  for (int f : cat.arrows_into[at]) s.arrows.set(f);
  return s;
}

Sieve empty_sieve(const FiniteCategory& cat, int at) {
  if (at < 0 || at >= cat.n_objects()) throw Error("UnknownObject", std::to_string(at));
  return Sieve{at, Bitset(cat.n_arrows())};
}

Sieve principal_sieve(const FiniteCategory& cat, int f) {
  Sieve s{cat.cod(f), Bitset(cat.n_arrows())};
  for (int g : cat.arrows_into[cat.dom(f)]) s.arrows.set(cat.table[f][g]);
  return s;
}

std::optional<std::pair<int, int>> sieve_closure_witness(const FiniteCategory& cat,
                                                         int at, const Bitset& arrows) {
  for (int f = 0; f < cat.n_arrows(); ++f) {
    if (!arrows.test(f)) continue;
    if (cat.cod(f) != at) return std::make_pair(f, -1);
    for (int g : cat.arrows_into[cat.dom(f)])
      if (!arrows.test(cat.table[f][g])) return std::make_pair(f, g);
  }
  return std::nullopt;
}

bool is_sieve(const FiniteCategory& cat, int at, const Bitset& arrows) {
  return !sieve_closure_witness(cat, at, arrows).has_value();
}

Sieve pullback_sieve(const FiniteCategory& cat, const Sieve& s, int f) {
  if (cat.cod(f) != s.at)
    throw Error("CodomainMismatch", "pullback of a sieve on " + cat.objects[s.at] +
                                        " along " + cat.arrows[f].name);
  Sieve out{cat.dom(f), Bitset(cat.n_arrows())};
  for (int g : cat.arrows_into[cat.dom(f)])
    if (s.arrows.test(cat.table[f][g])) out.arrows.set(g);
  return out;
}

std::vector<Bitset> all_sieves(const FiniteCategory& cat, int at) {
  std::set<Bitset> seen;
  seen.insert(Bitset(cat.n_arrows()));
  std::vector<Bitset> frontier(seen.begin(), seen.end());
  std::vector<Bitset> principals;
  for (int f : cat.arrows_into[at]) principals.push_back(principal_sieve(cat, f).arrows);
  while (!frontier.empty()) {
    std::vector<Bitset> next;
    for (const auto& s : frontier)
      for (const auto& p : principals) {
        Bitset u = s | p;
        if (seen.insert(u).second) next.push_back(u);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

bool Topology::covers(int at, const Bitset& sieve) const {
  const auto& v = cov[at];
  return std::binary_search(v.begin(), v.end(), sieve);
}

bool Topology::empty_covers(int at) const {
  return covers(at, Bitset(cat->n_arrows()));
}

TopologyValidation validate_topology(const FiniteCategory& cat,
                                     const std::vector<std::vector<Bitset>>& cov) {
  TopologyValidation out;
  auto fail = [&](std::string code, std::string detail) {
    out.issues.push_back({std::move(code), std::move(detail)});
  };
  if (static_cast<int>(cov.size()) != cat.n_objects()) {
    fail("NotASieve", "cover table must assign a family to every object");
    return out;
  }

  Topology top;
  top.cat = &cat;
  top.cov.assign(cat.n_objects(), {});
  for (int a = 0; a < cat.n_objects(); ++a) {
    std::set<Bitset> dedup;
    for (const auto& s : cov[a]) {
      if (auto w = sieve_closure_witness(cat, a, s)) {
        if (w->second < 0)
          fail("NotASieve", "family at " + cat.objects[a] + " contains arrow " +
                                cat.arrows[w->first].name + " with wrong codomain");
        else
          fail("NotASieve", "family at " + cat.objects[a] + " not closed: " +
                                cat.arrows[w->first].name + " ∘ " +
                                cat.arrows[w->second].name + " missing");
        continue;
      }
      dedup.insert(s);
    }
    top.cov[a] = {dedup.begin(), dedup.end()};
  }
  if (!out.issues.empty()) return out;

  for (int a = 0; a < cat.n_objects(); ++a)
    if (!top.covers(a, max_sieve(cat, a).arrows))
      fail("MaximalityViolation", "maximal sieve missing at " + cat.objects[a]);

  for (int a = 0; a < cat.n_objects(); ++a)
    for (const auto& s : top.cov[a])
      for (int f : cat.arrows_into[a]) {
        Sieve pb = pullback_sieve(cat, Sieve{a, s}, f);
        if (!top.covers(cat.dom(f), pb.arrows))
          fail("StabilityViolation", "pullback of a cover of " + cat.objects[a] +
                                         " along " + cat.arrows[f].name + " is not a cover");
      }

  // Local character, exhaustively over the sieve lattice. A fixed point is
  // unnecessary: if S is locally covering w.r.t. Cov, it must already be in
  // Cov, else we report the witness.
  for (int a = 0; a < cat.n_objects(); ++a) {
    for (const auto& s : all_sieves(cat, a)) {
      if (top.covers(a, s)) continue;
      for (const auto& r : top.cov[a]) {
        bool locally = true;
        for (int f : cat.arrows_into[a]) {
          if (!r.test(f)) continue;
          if (!top.covers(cat.dom(f), pullback_sieve(cat, Sieve{a, s}, f).arrows)) {
            locally = false;
            break;
          }
        }
        if (locally) {
          std::string s_names, r_names;
          for (int f = 0; f < cat.n_arrows(); ++f) {
            if (s.test(f)) s_names += (s_names.empty() ? "" : ",") + cat.arrows[f].name;
            if (r.test(f)) r_names += (r_names.empty() ? "" : ",") + cat.arrows[f].name;
          }
          fail("LocalCharacterViolation",
               "at " + cat.objects[a] + ": sieve {" + s_names +
                   "} pulls back to covers along the cover {" + r_names +
                   "} but is not itself covering");
          break;
        }
      }
    }
  }

  if (!out.issues.empty()) return out;
  out.topology = std::move(top);
  return out;
}

Topology trivial_topology(const FiniteCategory& cat) {
  std::vector<std::vector<Bitset>> cov(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) cov[a].push_back(max_sieve(cat, a).arrows);
  auto v = validate_topology(cat, cov);
  return *v.topology;
}

Topology dense_topology(const FiniteCategory& cat) {
  if (!cat.poset) throw Error("NotAPoset", "dense topology needs a poset category");
  std::vector<std::vector<Bitset>> cov(cat.n_objects());
  for (int p = 0; p < cat.n_objects(); ++p) {
    for (const auto& s : all_sieves(cat, p)) {
      bool dense = true;
      for (int g : cat.arrows_into[p]) {  // g: q→p, i.e. q ≤ p
        bool hit = false;
        for (int h : cat.arrows_into[cat.dom(g)])  // h: r→q
          if (s.test(cat.table[g][h])) {
            hit = true;
            break;
          }
        if (!hit) {
          dense = false;
          break;
        }
      }
      if (dense) cov[p].push_back(s);
    }
  }
  auto v = validate_topology(cat, cov);
  if (!v.ok())
    throw Error("NotAPoset", "dense family failed topology validation: " + v.issues[0].detail);
  return *v.topology;
}

Topology generate_topology(const FiniteCategory& cat, const Presentation& pres) {
  if (static_cast<int>(pres.bcov.size()) != cat.n_objects())
    throw Error("GeneratedFamilyNotATopology", "presentation must cover every object");
  std::vector<std::vector<Bitset>> cov(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) {
    for (const auto& b : pres.bcov[a])
      if (auto w = sieve_closure_witness(cat, a, b))
        throw Error("GeneratedFamilyNotATopology",
                    "basic cover at " + cat.objects[a] + " is not a sieve");
    for (const auto& s : all_sieves(cat, a))
      for (const auto& b : pres.bcov[a])
        if (b.subset_of(s)) {
          cov[a].push_back(s);
          break;
        }
  }
  auto v = validate_topology(cat, cov);
  if (!v.ok())
    throw Error("GeneratedFamilyNotATopology", v.issues[0].code + " — " + v.issues[0].detail);
  v.topology->presentation = pres;
  return *v.topology;
}

}  // namespace sheafkit
