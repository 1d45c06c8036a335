#include "edh/config.hpp"

#include <fstream>
#include <set>

namespace edh {
namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ValidationError("unknown config key '" + where + "." + k + "'");
}

template <class T>
void read(const json& obj, const char* key, const std::string& where, T& dst) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  const std::string name = where + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ValidationError(name + " must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ValidationError(name + " must be an integer");
    if constexpr (std::is_unsigned_v<T>)
      if (v.get<long long>() < 0) throw ValidationError(name + " must be non-negative");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ValidationError(name + " must be a number");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ValidationError(name + " must be a string");
  }
  dst = v.get<T>();
}

template <class T>
void read_list(const json& obj, const char* key, const std::string& where, std::vector<T>& dst) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ValidationError(where + "." + key + " must be an array");
  std::vector<T> out;
  for (const auto& e : v) {
    if constexpr (std::is_integral_v<T>) {
      if (!e.is_number_integer() || e.get<long long>() < 0)
        throw ValidationError(where + "." + key + " must hold non-negative integers");
    } else if (!e.is_number()) {
      throw ValidationError(where + "." + key + " must hold numbers");
    }
    out.push_back(e.get<T>());
  }
  dst = std::move(out);
}

}  // namespace

ModelParams RunConfig::model() const {
  ModelParams p;
  p.L = L;
  p.N = (N && !half_fill) ? *N : half_filling(L);
  p.J = J;
  p.Jp = Jp;
  p.U = U;
  p.eps = eps;
  return p;
}

void RunConfig::validate() const {
  model().validate();
  if (sweep_Lmin < 1 || sweep_Lmax < sweep_Lmin) throw ValidationError("sweep needs 1 <= Lmin <= Lmax");
  if (sweep_eps.empty()) throw ValidationError("sweep needs at least one eps value");
  if (overlap_Lmin < 2 || overlap_Lmax < overlap_Lmin) throw ValidationError("overlap sweep needs 2 <= Lmin <= Lmax");
  if (!(overlap_density > 0.0 && overlap_density <= 1.0)) throw ValidationError("overlap density must lie in (0, 1]");
  if (!(kappa > 0.0)) throw ValidationError("kappa must be positive");
  if (ref_site < 1 || ref_site > L) throw ValidationError("ref_site must lie in 1..L");
  if (cap == 0) throw ValidationError("cap must be positive");
  if (threads < 0) throw ValidationError("threads must be >= 0");
  if (node_sites) {
    const auto [p, q] = *node_sites;
    if (p < 1 || p > L || q < 1 || q > L || p == q) throw ValidationError("node sites must be distinct sites in 1..L");
  }
}

RunConfig config_from_json(const json& doc) {
  RunConfig c;
  only_keys(doc, "config", {"model", "sweep", "overlap", "integrable", "analysis", "out", "checkpoint", "threads", "seed", "tag"});
  if (doc.contains("model")) {
    const auto& m = doc["model"];
    only_keys(m, "model", {"L", "N", "half_fill", "J", "Jp", "U", "eps"});
    read(m, "L", "model", c.L);
    if (m.contains("N")) {
      int n = 0;
      read(m, "N", "model", n);
      c.N = n;
    }
    read(m, "half_fill", "model", c.half_fill);
    read(m, "J", "model", c.J);
    read(m, "Jp", "model", c.Jp);
    read(m, "U", "model", c.U);
    read(m, "eps", "model", c.eps);
  }
  if (doc.contains("sweep")) {
    const auto& s = doc["sweep"];
    only_keys(s, "sweep", {"Lmin", "Lmax", "eps"});
    read(s, "Lmin", "sweep", c.sweep_Lmin);
    read(s, "Lmax", "sweep", c.sweep_Lmax);
    read_list(s, "eps", "sweep", c.sweep_eps);
  }
  if (doc.contains("overlap")) {
    const auto& o = doc["overlap"];
    only_keys(o, "overlap", {"Lmin", "Lmax", "J", "U", "density"});
    read(o, "Lmin", "overlap", c.overlap_Lmin);
    read(o, "Lmax", "overlap", c.overlap_Lmax);
    read(o, "J", "overlap", c.overlap_J);
    read(o, "U", "overlap", c.overlap_U);
    read(o, "density", "overlap", c.overlap_density);
  }
  if (doc.contains("integrable")) {
    const auto& i = doc["integrable"];
    only_keys(i, "integrable", {"build_superposition", "node_sites"});
    read(i, "build_superposition", "integrable", c.build_superposition);
    if (i.contains("node_sites")) {
      std::vector<int> sites;
      read_list(i, "node_sites", "integrable", sites);
      if (sites.size() != 2) throw ValidationError("integrable.node_sites must hold two sites");
      c.node_sites = std::pair{sites[0], sites[1]};
    }
  }
  if (doc.contains("analysis")) {
    const auto& a = doc["analysis"];
    only_keys(a, "analysis", {"kappa", "ref_site", "cap", "states"});
    read(a, "kappa", "analysis", c.kappa);
    read(a, "ref_site", "analysis", c.ref_site);
    read(a, "cap", "analysis", c.cap);
    read_list(a, "states", "analysis", c.states);
  }
  std::string path;
  if (doc.contains("out")) {
    read(doc, "out", "config", path);
    c.out = path;
  }
  if (doc.contains("checkpoint")) {
    read(doc, "checkpoint", "config", path);
    c.checkpoint = path;
  }
  read(doc, "threads", "config", c.threads);
  read(doc, "seed", "config", c.seed);
  read(doc, "tag", "config", c.tag);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

json to_json(const RunConfig& c) {
  json j;
  j["model"] = {{"L", c.L}, {"half_fill", c.half_fill}, {"J", c.J}, {"Jp", c.Jp}, {"U", c.U}, {"eps", c.eps}};
  if (c.N) j["model"]["N"] = *c.N;
  j["sweep"] = {{"Lmin", c.sweep_Lmin}, {"Lmax", c.sweep_Lmax}, {"eps", c.sweep_eps}};
  j["overlap"] = {{"Lmin", c.overlap_Lmin}, {"Lmax", c.overlap_Lmax}, {"J", c.overlap_J}, {"U", c.overlap_U},
                  {"density", c.overlap_density}};
  j["integrable"] = {{"build_superposition", c.build_superposition}};
  if (c.node_sites) j["integrable"]["node_sites"] = {c.node_sites->first, c.node_sites->second};
  j["analysis"] = {{"kappa", c.kappa}, {"ref_site", c.ref_site}, {"cap", c.cap}, {"states", c.states}};
  j["out"] = c.out.string();
  if (c.checkpoint) j["checkpoint"] = c.checkpoint->string();
  j["threads"] = c.threads;
  j["seed"] = c.seed;
  j["tag"] = c.tag;
  return j;
}

}  // namespace edh
