#include "plhom/io.hpp"

#include <sstream>

#include <json.hpp>

#include "plhom/error.hpp"

namespace plhom::io {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json rat_json(const Rat& r) { return r.str(); }

Rat rat_from(const ordered_json& j, const char* where) {
  if (!j.is_string()) throw ParseError(std::string(where) + ": expected a \"p/q\" string");
  try {
    return Rat::parse(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(std::string(where) + ": " + e.what());
  }
}

ordered_json interval_json(const Interval& iv) {
  return ordered_json::array({rat_json(iv.left), rat_json(iv.right)});
}

Interval interval_from(const ordered_json& j, const char* where) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError(std::string(where) + ": expected [\"a\",\"b\"]");
  Rat l = rat_from(j[0], where);
  Rat r = rat_from(j[1], where);
  try {
    return Interval::checked(std::move(l), std::move(r));
  } catch (const DomainError& e) {
    throw ParseError(std::string(where) + ": " + e.what());
  }
}

ordered_json plmap_json(const PLMap& f) {
  ordered_json arr = ordered_json::array();
  for (const Node& n : f.nodes()) arr.push_back(ordered_json::array({rat_json(n.x), rat_json(n.y)}));
  return arr;
}

PLMap plmap_from(const ordered_json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a list of node pairs");
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& nj = j[i];
    std::string ctx = where + ".nodes[" + std::to_string(i) + "]";
    if (!nj.is_array() || nj.size() != 2) throw ParseError(ctx + ": expected [\"x\",\"y\"]");
    nodes.push_back({rat_from(nj[0], ctx.c_str()), rat_from(nj[1], ctx.c_str())});
  }
  try {
    return PLMap::from_nodes(std::move(nodes));
  } catch (const DomainError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

ordered_json word_json(const Word& w, const GroupSpec& G) {
  ordered_json arr = ordered_json::array();
  for (const Letter& l : w.letters())
    arr.push_back(ordered_json::array({G.generators[l.generator].first, l.exponent}));
  return arr;
}

Word word_from(const ordered_json& j, const GroupSpec& G, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a list of [name, exponent] letters");
  std::vector<Letter> letters;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& lj = j[i];
    std::string ctx = where + "[" + std::to_string(i) + "]";
    if (!lj.is_array() || lj.size() != 2 || !lj[0].is_string() || !lj[1].is_number_integer())
      throw ParseError(ctx + ": expected [name, exponent]");
    std::string name = lj[0].get<std::string>();
    int idx = -1;
    for (std::size_t g = 0; g < G.size(); ++g)
      if (G.generators[g].first == name) idx = static_cast<int>(g);
    if (idx < 0) throw ParseError(ctx + ": unknown generator \"" + name + "\"");
    letters.push_back({idx, lj[1].get<long>()});
  }
  return Word(std::move(letters));
}

ordered_json group_json(const GroupSpec& G) {
  ordered_json gens = ordered_json::object();
  for (auto& [name, m] : G.generators) gens[name] = plmap_json(m);
  ordered_json out = ordered_json::object();
  if (!G.name.empty()) out["name"] = G.name;
  out["generators"] = std::move(gens);
  return out;
}

GroupSpec group_from(const ordered_json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("generators") || !j["generators"].is_object())
    throw ParseError(where + ": expected {\"generators\": {name: nodes}}");
  std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "";
  std::vector<std::pair<std::string, PLMap>> gens;
  for (auto& [gname, gj] : j["generators"].items())
    gens.emplace_back(gname, plmap_from(gj, where + ".generators." + gname));
  try {
    return GroupSpec::checked(std::move(name), std::move(gens));
  } catch (const DomainError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

ordered_json parse_document(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
}

bool contains_object(const ordered_json& j) {
  if (j.is_object()) return true;
  if (j.is_array())
    for (const auto& e : j)
      if (contains_object(e)) return true;
  return false;
}

// Deterministic layout: objects go multiline, arrays stay on one line unless
// they hold objects. Node lists and words read as single rows this way.
void pretty(const ordered_json& j, std::string& out, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  std::string pad2(static_cast<std::size_t>(indent) + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto& [key, value] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad2 + ordered_json(key).dump() + ": ";
      pretty(value, out, indent + 2);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array() && contains_object(j)) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    bool first = true;
    for (const auto& e : j) {
      if (!first) out += ",\n";
      first = false;
      out += pad2;
      pretty(e, out, indent + 2);
    }
    out += "\n" + pad + "]";
  } else {
    out += j.dump();
  }
}

std::string dump_pretty(const ordered_json& j) {
  std::string out;
  pretty(j, out, 0);
  out += "\n";
  return out;
}

ordered_json step_json(const LogStep& s, const GroupSpec& G) {
  ordered_json o = ordered_json::object();
  o["kind"] = s.kind;
  if (s.kind == "word") {
    o["name"] = s.name;
    o["letters"] = word_json(s.word, G);
  } else if (s.kind == "inverse") {
    o["name"] = s.name;
    o["of"] = s.a;
  } else if (s.kind == "power") {
    o["name"] = s.name;
    o["of"] = s.a;
    o["exponent"] = s.exponent;
  } else if (s.kind == "product") {
    o["name"] = s.name;
    o["factors"] = s.factors;
  } else if (s.kind == "conjugate") {
    o["name"] = s.name;
    o["of"] = s.a;
    o["by"] = s.b;
    o["exponent"] = s.exponent;
  } else if (s.kind == "commutator") {
    o["name"] = s.name;
    o["a"] = s.a;
    o["b"] = s.b;
  } else if (s.kind == "level") {
    o["index"] = s.level;
    o["element"] = s.element;
    o["orbital"] = interval_json(s.orbital);
  } else if (s.kind == "note") {
    o["text"] = s.note;
  }
  return o;
}

LogStep step_from(const ordered_json& j, const GroupSpec& G, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ParseError(where + ": expected a log step object");
  LogStep s;
  s.kind = j["kind"].get<std::string>();
  auto need = [&](const char* field) -> const ordered_json& {
    if (!j.contains(field)) throw ParseError(where + ": step missing \"" + field + "\"");
    return j.at(field);
  };
  auto str = [&](const char* field) {
    const auto& v = need(field);
    if (!v.is_string()) throw ParseError(where + ": \"" + field + "\" must be a string");
    return v.get<std::string>();
  };
  if (s.kind == "word") {
    s.name = str("name");
    s.word = word_from(need("letters"), G, where + ".letters");
  } else if (s.kind == "inverse") {
    s.name = str("name");
    s.a = str("of");
  } else if (s.kind == "power") {
    s.name = str("name");
    s.a = str("of");
    s.exponent = need("exponent").get<long>();
  } else if (s.kind == "product") {
    s.name = str("name");
    for (auto& f : need("factors")) s.factors.push_back(f.get<std::string>());
  } else if (s.kind == "conjugate") {
    s.name = str("name");
    s.a = str("of");
    s.b = str("by");
    s.exponent = need("exponent").get<long>();
  } else if (s.kind == "commutator") {
    s.name = str("name");
    s.a = str("a");
    s.b = str("b");
  } else if (s.kind == "level") {
    s.level = need("index").get<int>();
    s.element = str("element");
    s.orbital = interval_from(need("orbital"), (where + ".orbital").c_str());
  } else if (s.kind == "note") {
    s.note = str("text");
  } else {
    throw ParseError(where + ": unknown step kind \"" + s.kind + "\"");
  }
  return s;
}

ordered_json certificate_json(const TowerCertificate& cert) {
  ordered_json o = ordered_json::object();
  o["type"] = "tower-certificate";
  o["group"] = group_json(cert.group);
  o["exemplary"] = cert.exemplary_claimed;
  ordered_json levels = ordered_json::array();
  for (const SignedOrbital& lv : cert.tower.levels) {
    ordered_json l = ordered_json::object();
    l["orbital"] = interval_json(lv.orbital);
    l["word"] = lv.witness ? word_json(*lv.witness, cert.group) : ordered_json();
    l["nodes"] = plmap_json(lv.signature);
    levels.push_back(std::move(l));
  }
  o["levels"] = std::move(levels);
  ordered_json log = ordered_json::array();
  for (const LogStep& s : cert.log) log.push_back(step_json(s, cert.group));
  o["log"] = std::move(log);
  return o;
}

TowerCertificate certificate_from(const ordered_json& j) {
  TowerCertificate cert;
  if (!j.is_object() || !j.contains("group") || !j.contains("levels") || !j.contains("log"))
    throw ParseError("certificate: expected {group, exemplary, levels, log}");
  cert.group = group_from(j["group"], "certificate.group");
  cert.exemplary_claimed = j.value("exemplary", false);
  const auto& levels = j["levels"];
  if (!levels.is_array()) throw ParseError("certificate.levels: expected a list");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    std::string ctx = "certificate.levels[" + std::to_string(i) + "]";
    const auto& l = levels[i];
    if (!l.is_object()) throw ParseError(ctx + ": expected an object");
    SignedOrbital so;
    so.orbital = interval_from(l.at("orbital"), (ctx + ".orbital").c_str());
    so.signature = plmap_from(l.at("nodes"), ctx + ".nodes");
    if (l.contains("word") && !l["word"].is_null())
      so.witness = word_from(l["word"], cert.group, ctx + ".word");
    cert.tower.levels.push_back(std::move(so));
  }
  const auto& log = j["log"];
  if (!log.is_array()) throw ParseError("certificate.log: expected a list");
  for (std::size_t i = 0; i < log.size(); ++i)
    cert.log.push_back(step_from(log[i], cert.group, "certificate.log[" + std::to_string(i) + "]"));
  return cert;
}

}  // namespace

std::string serialize(const PLMap& f) { return plmap_json(f).dump(); }

PLMap parse_plmap(const std::string& text) { return plmap_from(parse_document(text), "plmap"); }

std::string serialize(const GroupSpec& G) { return dump_pretty(group_json(G)); }

GroupSpec parse_group(const std::string& text) { return group_from(parse_document(text), "group"); }

std::string serialize(const TowerCertificate& cert) { return dump_pretty(certificate_json(cert)); }

TowerCertificate parse_certificate(const std::string& text) {
  return certificate_from(parse_document(text));
}

std::string serialize(const WreathRealization& w) {
  ordered_json o = ordered_json::object();
  o["type"] = "wreath-realization";
  o["ambient"] = interval_json(w.ambient);
  o["copies_materialized"] = w.copies_materialized;
  ordered_json base = ordered_json::object();
  for (auto& [name, m] : w.base_generators) base[name] = plmap_json(m);
  o["base_generators"] = std::move(base);
  o["top_generator"] = ordered_json::object();
  o["top_generator"][w.top_generator.first] = plmap_json(w.top_generator.second);
  return dump_pretty(o);
}

ObstructionInput parse_obstruction_input(const std::string& text) {
  ordered_json j = parse_document(text);
  if (!j.is_object() || !j.contains("alpha") || !j.contains("beta") || !j.contains("gamma"))
    throw ParseError("obstruction input: expected {alpha, beta, gamma}");
  ObstructionInput in;
  in.alpha = plmap_from(j["alpha"], "alpha");
  in.beta = plmap_from(j["beta"], "beta");
  in.gamma = plmap_from(j["gamma"], "gamma");
  if (j.contains("theta_exponent_bound"))
    in.bounds.theta_exponent_bound = j["theta_exponent_bound"].get<long>();
  return in;
}

std::string serialize_obstruction_log(const std::vector<ObstructionLogEntry>& log,
                                      const PLMap* final_gamma) {
  ordered_json o = ordered_json::object();
  ordered_json steps = ordered_json::array();
  for (const auto& e : log) {
    ordered_json s = ordered_json::object();
    s["note"] = e.note;
    if (e.map) s["nodes"] = plmap_json(*e.map);
    steps.push_back(std::move(s));
  }
  o["log"] = std::move(steps);
  if (final_gamma) o["gamma_final"] = plmap_json(*final_gamma);
  return dump_pretty(o);
}

std::string serialize_orbitals(const GroupSpec& G) {
  ordered_json o = ordered_json::object();
  ordered_json orbs = ordered_json::array();
  for (const Interval& iv : group_orbitals(G)) orbs.push_back(interval_json(iv));
  o["group_orbitals"] = std::move(orbs);
  ordered_json per = ordered_json::object();
  for (auto& [name, m] : G.generators) {
    ordered_json list = ordered_json::array();
    for (auto& orb : orbitals_of_map(m)) {
      ordered_json e = ordered_json::object();
      e["interval"] = interval_json(orb.interval);
      e["direction"] = to_string(orb.direction);
      list.push_back(std::move(e));
    }
    per[name] = std::move(list);
  }
  o["generators"] = std::move(per);
  return dump_pretty(o);
}

namespace {

ordered_json report_json(const AnalysisReport& r, const GroupSpec& G) {
  ordered_json o = ordered_json::object();
  o["type"] = "analysis-report";
  if (!G.name.empty()) o["group"] = G.name;
  o["max_word_length"] = r.config.L;
  ordered_json orbs = ordered_json::array();
  for (const Interval& iv : r.orbitals) orbs.push_back(interval_json(iv));
  o["orbitals"] = std::move(orbs);

  auto signed_orbital_json = [&](const SignedOrbital& so) {
    ordered_json s = ordered_json::object();
    s["orbital"] = interval_json(so.orbital);
    s["word"] = so.witness ? word_json(*so.witness, G) : ordered_json();
    s["nodes"] = plmap_json(so.signature);
    return s;
  };
  if (r.transition_chain) {
    ordered_json t = ordered_json::object();
    t["first"] = signed_orbital_json(r.transition_chain->first);
    t["second"] = signed_orbital_json(r.transition_chain->second);
    o["transition_chain"] = std::move(t);
  } else {
    o["transition_chain"] = nullptr;
  }
  if (r.imbalance) {
    ordered_json t = ordered_json::object();
    t["word"] = word_json(r.imbalance->word, G);
    t["orbital"] = interval_json(r.imbalance->orbital);
    t["realizes"] = to_string(r.imbalance->end);
    t["nodes"] = plmap_json(r.imbalance->map);
    o["imbalance"] = std::move(t);
  } else {
    o["imbalance"] = nullptr;
  }
  if (r.inconsistent) {
    ordered_json t = ordered_json::object();
    t["word"] = word_json(r.inconsistent->word, G);
    t["orbital"] = interval_json(r.inconsistent->orbital);
    t["nodes"] = plmap_json(r.inconsistent->map);
    o["inconsistent"] = std::move(t);
  } else {
    o["inconsistent"] = nullptr;
  }

  o["depth_lower_bound"] = r.depth_lower_bound;
  o["certificate"] = r.certificate ? certificate_json(*r.certificate) : ordered_json();

  ordered_json ds = ordered_json::array();
  for (const auto& st : r.derived_series) {
    ordered_json e = ordered_json::object();
    e["level"] = st.level;
    e["nontrivial_element_found"] = st.nontrivial_found;
    e["witness"] = st.witness ? word_json(*st.witness, G) : ordered_json();
    ds.push_back(std::move(e));
  }
  o["derived_series"] = std::move(ds);

  ordered_json v = ordered_json::object();
  v["kind"] = to_string(r.verdict);
  if (r.verdict == VerdictKind::NonsolvableCertified)
    v["certificate_kind"] = to_string(r.verdict_certificate);
  if (r.verdict == VerdictKind::DerivedLengthAtLeast) v["n"] = r.verdict_n;
  if (r.verdict == VerdictKind::InconclusiveUpTo) v["L"] = r.verdict_L;
  o["verdict"] = std::move(v);
  o["truncated"] = r.truncated;
  o["cross_check_ok"] = r.cross_check_ok;
  return o;
}

}  // namespace

std::string serialize_report(const AnalysisReport& r, const GroupSpec& G) {
  return dump_pretty(report_json(r, G));
}

std::string report_markup(const AnalysisReport& r, const GroupSpec& G) {
  std::ostringstream os;
  os << "# Analysis";
  if (!G.name.empty()) os << " of " << G.name;
  os << "\n\n";
  os << "Searched words up to length " << r.config.L << (r.truncated ? " (truncated by caps)" : "")
     << ".\n\n";
  os << "## Orbitals\n\n";
  if (r.orbitals.empty()) os << "- none (the group acts trivially)\n";
  for (const Interval& iv : r.orbitals) os << "- (" << iv.left << ", " << iv.right << ")\n";
  os << "\n## Witnesses\n\n";
  if (r.imbalance)
    os << "- imbalance: `" << word_to_string(G, r.imbalance->word) << "` realizes the "
       << (r.imbalance->end == RealizationTag::LeadingOnly ? "leading" : "trailing")
       << " end only of (" << r.imbalance->orbital.left << ", " << r.imbalance->orbital.right
       << ")\n";
  if (r.transition_chain)
    os << "- transition chain: `" << word_to_string(G, *r.transition_chain->first.witness)
       << "` on (" << r.transition_chain->first.orbital.left << ", "
       << r.transition_chain->first.orbital.right << ") interleaves `"
       << word_to_string(G, *r.transition_chain->second.witness) << "` on ("
       << r.transition_chain->second.orbital.left << ", "
       << r.transition_chain->second.orbital.right << ")\n";
  if (r.inconsistent)
    os << "- inconsistent realization: `" << word_to_string(G, r.inconsistent->word) << "` on ("
       << r.inconsistent->orbital.left << ", " << r.inconsistent->orbital.right << ")\n";
  if (!r.imbalance && !r.transition_chain && !r.inconsistent)
    os << "- none up to L = " << r.config.L << "\n";
  os << "\n## Depth\n\n";
  os << "- certified lower bound: " << r.depth_lower_bound << "\n";
  if (r.certificate && r.certificate->tower.height() > 0) {
    os << "- tower (smallest orbital first):\n";
    for (const SignedOrbital& lv : r.certificate->tower.levels)
      os << "    - (" << lv.orbital.left << ", " << lv.orbital.right << ") signed by `"
         << (lv.witness ? word_to_string(G, *lv.witness) : std::string("?")) << "`\n";
  }
  os << "\n## Derived series sampling\n\n";
  if (r.derived_series.empty()) os << "- no levels sampled\n";
  for (const auto& st : r.derived_series) {
    os << "- level " << st.level << ": "
       << (st.nontrivial_found ? "nontrivial element found" : "nothing found");
    if (st.witness) os << " (`" << word_to_string(G, *st.witness) << "`)";
    os << "\n";
  }
  os << "\n## Verdict\n\n";
  switch (r.verdict) {
    case VerdictKind::NonsolvableCertified:
      os << "**Not solvable**, certified by a verified " << to_string(r.verdict_certificate)
         << " witness.\n";
      break;
    case VerdictKind::DerivedLengthAtLeast:
      os << "**Derived length at least " << r.verdict_n << "** (certified tower); no "
         << "non-solvability witness up to L = " << r.config.L << ".\n";
      break;
    case VerdictKind::InconclusiveUpTo:
      os << "**Inconclusive up to L = " << r.verdict_L << "** (search truncated by caps).\n";
      break;
  }
  if (!r.cross_check_ok)
    os << "\nWARNING: some derived level below the depth bound produced no nontrivial sample.\n";
  return os.str();
}

FileKind detect_kind(const std::string& text) {
  ordered_json j = parse_document(text);
  if (j.is_array()) return FileKind::PLMapFile;
  if (j.is_object()) {
    if (j.contains("alpha") && j.contains("beta") && j.contains("gamma"))
      return FileKind::ObstructionFile;
    if (j.contains("log") && j.contains("levels")) return FileKind::CertificateFile;
    if (j.contains("generators")) return FileKind::GroupFile;
  }
  throw ParseError("unrecognized document shape");
}

}  // namespace plhom::io
