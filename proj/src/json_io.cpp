#include "sheafkit/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sheafkit {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error("ParseError", msg); }

Bitset sieve_from_names(const FiniteCategory& cat, int at, const ordered_json& arr) {
  Bitset s(cat.n_arrows());
  for (const auto& name : arr) {
    int f = cat.arrow_index(name.get<std::string>());
    if (f < 0) parse_fail("unknown arrow '" + name.get<std::string>() + "' in cover");
    if (cat.cod(f) != at) parse_fail("arrow '" + name.get<std::string>() + "' does not land in the covered object");
    s.set(f);
  }
  return s;
}

}  // namespace

Site load_site(const ordered_json& j) {
  if (!j.contains("category")) parse_fail("site file needs a 'category' block");
  const auto& cj = j["category"];
  Site site;
  if (cj.contains("poset")) {
    const auto& pj = cj["poset"];
    std::vector<std::string> elements = pj.at("elements").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> leq;
    if (pj.contains("leq"))
      for (const auto& pr : pj["leq"]) leq.emplace_back(pr.at(0).get<std::string>(), pr.at(1).get<std::string>());
    site.cat = std::make_shared<FiniteCategory>(poset_as_category(elements, leq));
  } else {
    RawCategory raw;
    raw.objects = cj.at("objects").get<std::vector<std::string>>();
    for (const auto& aj : cj.at("arrows"))
      raw.arrows.push_back({aj.at("name").get<std::string>(), aj.at("dom").get<std::string>(),
                            aj.at("cod").get<std::string>()});
    if (!cj.contains("identities")) parse_fail("category block needs 'identities'");
    for (const auto& o : raw.objects) {
      if (!cj["identities"].contains(o)) parse_fail("missing identity for object '" + o + "'");
      raw.identities.push_back(cj["identities"][o].get<std::string>());
    }
    if (cj.contains("compose"))
      for (const auto& e : cj["compose"])
        raw.compose.push_back({e.at("g").get<std::string>(), e.at("f").get<std::string>(),
                               e.at("gf").get<std::string>()});
    auto v = validate_category(raw);
    if (!v.ok()) {
      std::string msg = "category validation failed:";
      for (const auto& issue : v.issues) msg += "\n  " + issue.code + ": " + issue.detail;
      throw Error("ValidationError", msg);
    }
    site.cat = std::make_shared<FiniteCategory>(std::move(*v.category));
  }
  const FiniteCategory& cat = *site.cat;

  if (!j.contains("topology")) parse_fail("site file needs a 'topology' block");
  const auto& tj = j["topology"];
  std::string kind = tj.at("kind").get<std::string>();
  site.topology_kind = kind;
  if (kind == "trivial") {
    site.top = trivial_topology(cat);
  } else if (kind == "dense-poset") {
    site.top = dense_topology(cat);
  } else if (kind == "explicit" || kind == "basis") {
    std::vector<std::vector<Bitset>> covers(cat.n_objects());
    if (tj.contains("covers"))
      for (const auto& [obj, list] : tj["covers"].items()) {
        int a = cat.object_index(obj);
        if (a < 0) parse_fail("unknown object '" + obj + "' in topology block");
        for (const auto& arr : list) covers[a].push_back(sieve_from_names(cat, a, arr));
      }
    if (kind == "basis") {
      site.top = generate_topology(cat, Presentation{covers});
    } else {
      auto v = validate_topology(cat, covers);
      if (!v.ok()) {
        std::string msg = "topology validation failed:";
        for (const auto& issue : v.issues) msg += "\n  " + issue.code + ": " + issue.detail;
        throw Error("ValidationError", msg);
      }
      site.top = std::move(*v.topology);
    }
  } else {
    parse_fail("unknown topology kind '" + kind + "'");
  }
  return site;
}

Site load_site_file(const std::string& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(std::string("bad JSON in ") + path + ": " + e.what());
  }
  return load_site(j);
}

Presheaf load_presheaf(const FiniteCategory& cat, const ordered_json& j) {
  Presheaf p;
  p.cat = &cat;
  p.fib.assign(cat.n_objects(), 0);
  p.labels.assign(cat.n_objects(), {});
  if (!j.contains("fibers")) parse_fail("presheaf needs a 'fibers' block");
  for (const auto& [obj, labels] : j["fibers"].items()) {
    int a = cat.object_index(obj);
    if (a < 0) parse_fail("unknown object '" + obj + "' in fibers");
    for (const auto& l : labels) p.labels[a].push_back(l.get<std::string>());
    p.fib[a] = static_cast<int>(p.labels[a].size());
  }
  auto elem = [&](int a, const std::string& label) {
    for (int i = 0; i < p.fib[a]; ++i)
      if (p.labels[a][i] == label) return i;
    parse_fail("unknown element '" + label + "' at object '" + cat.objects[a] + "'");
  };
  p.act.assign(cat.n_arrows(), {});
  for (int f = 0; f < cat.n_arrows(); ++f) {
    int a = cat.cod(f);
    p.act[f].assign(p.fib[a], -1);
    if (f == cat.identity[a]) {
      for (int i = 0; i < p.fib[a]; ++i) p.act[f][i] = i;
    }
  }
  if (j.contains("restrictions"))
    for (const auto& [aname, table] : j["restrictions"].items()) {
      int f = cat.arrow_index(aname);
      if (f < 0) parse_fail("unknown arrow '" + aname + "' in restrictions");
      for (const auto& [from, to] : table.items())
        p.act[f][elem(cat.cod(f), from)] = elem(cat.dom(f), to.get<std::string>());
    }
  for (int f = 0; f < cat.n_arrows(); ++f)
    for (int i = 0; i < p.fib[cat.cod(f)]; ++i)
      if (p.act[f][i] < 0)
        parse_fail("missing restriction of '" + p.labels[cat.cod(f)][i] + "' along '" +
                   cat.arrows[f].name + "'");
  auto issues = validate_presheaf(p);
  if (!issues.empty()) {
    std::string msg = "presheaf validation failed:";
    for (const auto& issue : issues) msg += "\n  " + issue.code + ": " + issue.detail;
    throw Error("ValidationError", msg);
  }
  return p;
}

ordered_json presheaf_to_json(const Presheaf& p) {
  const auto& cat = *p.cat;
  ordered_json j;
  ordered_json fibers = ordered_json::object();
  for (int a = 0; a < cat.n_objects(); ++a) {
    ordered_json labels = ordered_json::array();
    for (int i = 0; i < p.fib[a]; ++i) labels.push_back(p.label(a, i));
    fibers[cat.objects[a]] = labels;
  }
  j["fibers"] = fibers;
  ordered_json restrictions = ordered_json::object();
  for (int f = 0; f < cat.n_arrows(); ++f) {
    if (f == cat.identity[cat.cod(f)]) continue;
    ordered_json table = ordered_json::object();
    for (int i = 0; i < p.fib[cat.cod(f)]; ++i)
      table[p.label(cat.cod(f), i)] = p.label(cat.dom(f), p.restrict(i, f));
    restrictions[cat.arrows[f].name] = table;
  }
  j["restrictions"] = restrictions;
  return j;
}

PresheafMorphism load_morphism(const FiniteCategory& cat, const ordered_json& j) {
  if (!j.contains("src") || !j.contains("dst") || !j.contains("map"))
    parse_fail("morphism needs 'src', 'dst' and 'map' blocks");
  Presheaf src = load_presheaf(cat, j["src"]);
  Presheaf dst = load_presheaf(cat, j["dst"]);
  PresheafMorphism m{src, dst, {}};
  m.comp.resize(cat.n_objects());
  for (int a = 0; a < cat.n_objects(); ++a) m.comp[a].assign(src.fib[a], -1);
  auto elem = [&](const Presheaf& p, int a, const std::string& label) {
    for (int i = 0; i < p.fib[a]; ++i)
      if (p.label(a, i) == label) return i;
    parse_fail("unknown element '" + label + "' at object '" + cat.objects[a] + "'");
  };
  for (const auto& [obj, table] : j["map"].items()) {
    int a = cat.object_index(obj);
    if (a < 0) parse_fail("unknown object '" + obj + "' in map");
    for (const auto& [from, to] : table.items())
      m.comp[a][elem(src, a, from)] = elem(dst, a, to.get<std::string>());
  }
  for (int a = 0; a < cat.n_objects(); ++a)
    for (int i = 0; i < src.fib[a]; ++i)
      if (m.comp[a][i] < 0)
        parse_fail("missing image of '" + src.label(a, i) + "' at '" + cat.objects[a] + "'");
  auto issues = validate_morphism(m);
  if (!issues.empty()) {
    std::string msg = "morphism validation failed:";
    for (const auto& issue : issues) msg += "\n  " + issue.code + ": " + issue.detail;
    throw Error("ValidationError", msg);
  }
  return m;
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a:") + buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("ParseError", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Report::Report(std::string command) : command_(std::move(command)) {}

void Report::add_input(const std::string& name, const std::string& raw_bytes) {
  inputs_[name] = fnv1a_digest(raw_bytes);
}
void Report::set_config(const std::string& key, const ordered_json& value) {
  config_[key] = value;
}
void Report::add_check(const std::string& name, bool pass, const ordered_json& witness) {
  ordered_json c;
  c["name"] = name;
  c["pass"] = pass;
  if (!pass && !witness.is_null()) c["witness"] = witness;
  checks_.push_back(c);
  if (!pass) any_fail_ = true;
}
void Report::add_data(const std::string& key, const ordered_json& value) {
  data_[key] = value;
}
bool Report::all_pass() const { return !any_fail_; }

ordered_json Report::to_json(bool with_timing) const {
  ordered_json j;
  j["command"] = command_;
  j["inputs"] = inputs_;
  j["config"] = config_;
  j["checks"] = checks_;
  if (!data_.empty()) j["data"] = data_;
  j["ok"] = all_pass();
  if (with_timing) j["timing_ms"] = timing_ms_;
  return j;
}

}  // namespace sheafkit
