#pragma once

#include <memory>

#include <nlohmann/json.hpp>

#include "sheafkit/presheaf.hpp"
#include "sheafkit/topology.hpp"

namespace sheafkit {

using ordered_json = nlohmann::ordered_json;

// A parsed site file: category + topology. The category sits behind a
// stable address so the topology (and any presheaves built on it) can point
// at it across moves of the Site value.
struct Site {
  std::shared_ptr<FiniteCategory> cat;
  Topology top;
  std::string topology_kind;
};

// Site schema:
//   { "category": { "objects": [...],
//                   "arrows": [{"name","dom","cod"}...],
//                   "identities": {obj: arrow, ...},
//                   "compose": [{"g","f","gf"}...] }
//     | { "poset": {"elements": [...], "leq": [[q,p]...] } },
//     "topology": {"kind": "trivial"}
//                 | {"kind": "dense-poset"}
//                 | {"kind": "explicit", "covers": {obj: [[arrow...]...]}}
//                 | {"kind": "basis",    "covers": {obj: [[arrow...]...]}} }
// Validation failures throw Error("ValidationError") with the collected
// issues; malformed JSON throws Error("ParseError").
Site load_site(const ordered_json& j);
Site load_site_file(const std::string& path);

// Presheaf schema (relative to a category):
//   { "fibers": {obj: [label...]},
//     "restrictions": {arrow: {label: label, ...}, ...} }
// Identity restrictions are implied; all other arrows with nonempty source
// fiber are required.
Presheaf load_presheaf(const FiniteCategory& cat, const ordered_json& j);
ordered_json presheaf_to_json(const Presheaf& p);

// Morphism schema: { "src": presheaf, "dst": presheaf, "map": {obj: {label: label}} }
PresheafMorphism load_morphism(const FiniteCategory& cat, const ordered_json& j);

// FNV-1a digest of raw bytes, for the report's input block.
std::string fnv1a_digest(const std::string& bytes);
std::string read_file(const std::string& path);  // Error("ParseError") if unreadable

// The per-command machine-readable report. Byte-stable for fixed inputs;
// timing is attached only when requested.
class Report {
public:
  Report(std::string command);
  void add_input(const std::string& name, const std::string& raw_bytes);
  void set_config(const std::string& key, const ordered_json& value);
  void add_check(const std::string& name, bool pass, const ordered_json& witness = {});
  void add_data(const std::string& key, const ordered_json& value);
  void set_timing_ms(double ms) { timing_ms_ = ms; }

  bool all_pass() const;
  // exit 0 iff all checks pass, else 1
  int exit_code() const { return all_pass() ? 0 : 1; }
  ordered_json to_json(bool with_timing) const;

private:
  std::string command_;
  ordered_json inputs_ = ordered_json::object();
  ordered_json config_ = ordered_json::object();
  ordered_json checks_ = ordered_json::array();
  ordered_json data_ = ordered_json::object();
  double timing_ms_ = 0.0;
  bool any_fail_ = false;
};

}  // namespace sheafkit
