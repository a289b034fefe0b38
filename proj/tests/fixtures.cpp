#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace fixtures {

namespace {

using Encoding = std::vector<int>;

// Flatten the structure after relabeling objects by operm and arrows by
// aperm. Every relabeling yields an isomorphic copy, so the minimum encoding
// over all permutations is a canonical form of the isomorphism class.
Encoding encode(const FiniteCategory& cat, const std::vector<int>& operm,
                const std::vector<int>& aperm) {
  Encoding e;
  e.push_back(cat.n_objects());
  e.push_back(cat.n_arrows());
  int n = cat.n_arrows();
  std::vector<int> ainv(n);
  for (int i = 0; i < n; ++i) ainv[aperm[i]] = i;
  for (int i = 0; i < n; ++i) {
    int f = ainv[i];
    e.push_back(operm[cat.dom(f)]);
    e.push_back(operm[cat.cod(f)]);
  }
  std::vector<int> ids(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) ids[operm[a]] = aperm[cat.identity[a]];
  for (int v : ids) e.push_back(v);
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f) {
      int gg = ainv[g], ff = ainv[f];
      e.push_back(cat.composable(gg, ff) ? aperm[cat.table[gg][ff]] : -1);
    }
  return e;
}

Encoding canonical(const FiniteCategory& cat) {
  int no = cat.n_objects(), na = cat.n_arrows();
  std::vector<int> operm(no);
  std::iota(operm.begin(), operm.end(), 0);
  Encoding best;
  do {
    std::vector<int> aperm(na);
    std::iota(aperm.begin(), aperm.end(), 0);
    do {
      Encoding e = encode(cat, operm, aperm);
      if (best.empty() || e < best) best = e;
    } while (std::next_permutation(aperm.begin(), aperm.end()));
  } while (std::next_permutation(operm.begin(), operm.end()));
  return best;
}

}  // namespace

std::vector<FiniteCategory> all_categories(int max_obj, int max_arr) {
  std::vector<FiniteCategory> out;
  std::set<Encoding> seen;
  for (int no = 1; no <= max_obj; ++no) {
    for (int extra = 0; extra + no <= max_arr; ++extra) {
      // endpoints of the extra arrows
      int combos = 1;
      for (int i = 0; i < extra; ++i) combos *= no * no;
      for (int combo = 0; combo < combos; ++combo) {
        FiniteCategory cat;
        for (int a = 0; a < no; ++a) cat.objects.push_back("o" + std::to_string(a));
        cat.identity.resize(no);
        for (int a = 0; a < no; ++a) {
          cat.identity[a] = static_cast<int>(cat.arrows.size());
          cat.arrows.push_back({"id" + std::to_string(a), a, a});
        }
        int c = combo;
        for (int i = 0; i < extra; ++i) {
          int d = c % no;
          c /= no;
          int cod = c % no;
          c /= no;
          cat.arrows.push_back({"e" + std::to_string(i), d, cod});
        }
        int na = cat.n_arrows();
        cat.table.assign(na, std::vector<int>(na, -1));
        for (int f = 0; f < na; ++f) {
          cat.table[cat.identity[cat.cod(f)]][f] = f;
          cat.table[f][cat.identity[cat.dom(f)]] = f;
        }
        // free composable pairs (both non-identity)
        std::vector<std::pair<int, int>> free_pairs;
        for (int g = no; g < na; ++g)
          for (int f = no; f < na; ++f)
            if (cat.composable(g, f)) free_pairs.emplace_back(g, f);
        std::function<void(std::size_t)> fill = [&](std::size_t i) {
          if (i == free_pairs.size()) {
            cat.rebuild_indexes();
            if (check_category_laws(cat).empty()) {
              Encoding e = canonical(cat);
              if (seen.insert(e).second) out.push_back(cat);
            }
            return;
          }
          auto [g, f] = free_pairs[i];
          for (int h = 0; h < na; ++h) {
            if (cat.dom(h) != cat.dom(f) || cat.cod(h) != cat.cod(g)) continue;
            cat.table[g][f] = h;
            fill(i + 1);
            cat.table[g][f] = -1;
          }
        };
        fill(0);
      }
    }
  }
  return out;
}

}  // namespace fixtures
