#include "sheafkit/category.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sheafkit {

void FiniteCategory::rebuild_indexes() {
  arrows_into.assign(n_objects(), {});
  arrows_from.assign(n_objects(), {});
  for (int f = 0; f < n_arrows(); ++f) {
    arrows_into[arrows[f].cod].push_back(f);
    arrows_from[arrows[f].dom].push_back(f);
  }
}

CategoryValidation validate_category(const RawCategory& raw) {
  CategoryValidation out;
  auto fail = [&](std::string code, std::string detail) {
    out.issues.push_back({std::move(code), std::move(detail)});
  };

  FiniteCategory cat;
  cat.objects = raw.objects;
  {
    std::set<std::string> seen;
    for (auto& o : raw.objects)
      if (!seen.insert(o).second) fail("DuplicateObject", o);
  }

  std::map<std::string, int> arrow_of;
  for (auto& a : raw.arrows) {
    if (arrow_of.count(a.name)) {
      fail("DuplicateArrow", a.name);
      continue;
    }
    int d = cat.object_index(a.dom), c = cat.object_index(a.cod);
    if (d < 0) fail("DanglingEndpoint", "arrow " + a.name + " has unknown dom " + a.dom);
    if (c < 0) fail("DanglingEndpoint", "arrow " + a.name + " has unknown cod " + a.cod);
    arrow_of[a.name] = static_cast<int>(cat.arrows.size());
    cat.arrows.push_back({a.name, d, c});
  }
  if (!out.issues.empty()) return out;

  cat.identity.assign(cat.n_objects(), -1);
  if (raw.identities.size() != raw.objects.size()) {
    fail("MissingIdentity", "expected one identity per object");
    return out;
  }
  for (int i = 0; i < cat.n_objects(); ++i) {
    auto it = arrow_of.find(raw.identities[i]);
    if (it == arrow_of.end()) {
      fail("MissingIdentity", "object " + cat.objects[i] + ": unknown arrow " + raw.identities[i]);
      continue;
    }
    int f = it->second;
    if (cat.dom(f) != i || cat.cod(f) != i)
      fail("MissingIdentity", "identity of " + cat.objects[i] + " must be an endo-arrow on it");
    cat.identity[i] = f;
  }
  if (!out.issues.empty()) return out;

  const int n = cat.n_arrows();
  cat.table.assign(n, std::vector<int>(n, -1));
  // forced identity compositions
  for (int f = 0; f < n; ++f) {
    cat.table[cat.identity[cat.cod(f)]][f] = f;
    cat.table[f][cat.identity[cat.dom(f)]] = f;
  }
  for (auto& e : raw.compose) {
    auto g = arrow_of.find(e.g), f = arrow_of.find(e.f), gf = arrow_of.find(e.gf);
    if (g == arrow_of.end() || f == arrow_of.end() || gf == arrow_of.end()) {
      fail("DanglingEndpoint", "compose entry (" + e.g + ", " + e.f + ") names unknown arrows");
      continue;
    }
    if (!cat.composable(g->second, f->second)) {
      fail("MissingComposite",
           "compose(" + e.g + ", " + e.f + ") declared but cod(f) != dom(g)");
      continue;
    }
    int prev = cat.table[g->second][f->second];
    if (prev >= 0 && prev != gf->second) {
      fail("MissingComposite", "conflicting entries for compose(" + e.g + ", " + e.f + ")");
      continue;
    }
    cat.table[g->second][f->second] = gf->second;
  }
  if (!out.issues.empty()) return out;

  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f) {
      if (!cat.composable(g, f)) continue;
      int gf = cat.table[g][f];
      if (gf < 0) {
        fail("MissingComposite",
             "compose(" + cat.arrows[g].name + ", " + cat.arrows[f].name + ") undefined");
        continue;
      }
      if (cat.dom(gf) != cat.dom(f) || cat.cod(gf) != cat.cod(g))
        fail("DanglingEndpoint",
             "compose(" + cat.arrows[g].name + ", " + cat.arrows[f].name + ") = " +
                 cat.arrows[gf].name + " has wrong endpoints");
    }
  if (!out.issues.empty()) return out;

  cat.rebuild_indexes();
  for (auto& issue : check_category_laws(cat)) out.issues.push_back(issue);
  if (!out.issues.empty()) return out;

  out.category = std::move(cat);
  return out;
}

std::vector<Issue> check_category_laws(const FiniteCategory& cat) {
  std::vector<Issue> issues;
  const int n = cat.n_arrows();
  for (int f = 0; f < n; ++f) {
    if (cat.table[cat.identity[cat.cod(f)]][f] != f ||
        cat.table[f][cat.identity[cat.dom(f)]] != f)
      issues.push_back({"MissingIdentity", "identity law fails at " + cat.arrows[f].name});
  }
  for (int h = 0; h < n; ++h)
    for (int g = 0; g < n; ++g) {
      if (!cat.composable(h, g)) continue;
      for (int f = 0; f < n; ++f) {
        if (!cat.composable(g, f)) continue;
        int hg = cat.table[h][g], gf = cat.table[g][f];
        if (hg < 0 || gf < 0) continue;
        if (cat.table[hg][f] != cat.table[h][gf])
          issues.push_back({"NonAssociative",
                            "(" + cat.arrows[h].name + " ∘ " + cat.arrows[g].name + ") ∘ " +
                                cat.arrows[f].name + " ≠ " + cat.arrows[h].name + " ∘ (" +
                                cat.arrows[g].name + " ∘ " + cat.arrows[f].name + ")"});
      }
    }
  return issues;
}

FiniteCategory poset_as_category(
    const std::vector<std::string>& elements,
    const std::vector<std::pair<std::string, std::string>>& leq) {
  const int n = static_cast<int>(elements.size());
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  auto idx = [&](const std::string& s) {
    for (int i = 0; i < n; ++i)
      if (elements[i] == s) return i;
    throw Error("UnknownObject", s);
  };
  for (int i = 0; i < n; ++i) le[i][i] = true;
  for (auto& [q, p] : leq) le[idx(q)][idx(p)] = true;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (le[i][j] && le[j][k] && !le[i][k])
          throw Error("NotAPartialOrder", "relation not transitive at (" + elements[i] +
                                              ", " + elements[j] + ", " + elements[k] + ")");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && le[i][j] && le[j][i])
        throw Error("NotAPartialOrder",
                    "antisymmetry fails at (" + elements[i] + ", " + elements[j] + ")");

  FiniteCategory cat;
  cat.objects = elements;
  cat.poset = true;
  std::vector<std::vector<int>> arrow(n, std::vector<int>(n, -1));
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p)
      if (le[q][p]) {
        arrow[q][p] = cat.n_arrows();
        std::string name =
            q == p ? "id_" + elements[q] : elements[q] + "<=" + elements[p];
        cat.arrows.push_back({name, q, p});
      }
  cat.identity.assign(n, -1);
  for (int q = 0; q < n; ++q) cat.identity[q] = arrow[q][q];
  const int m = cat.n_arrows();
  cat.table.assign(m, std::vector<int>(m, -1));
  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f)
      if (cat.composable(g, f)) cat.table[g][f] = arrow[cat.dom(f)][cat.cod(g)];
  cat.rebuild_indexes();
  return cat;
}

}  // namespace sheafkit
