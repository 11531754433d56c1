#include <cmath>
#include <fstream>
#include <set>

#include "fermiswap/cli.hpp"

namespace fermiswap::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Walks one JSON object, rejecting keys that were never asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  ~ObjectReader() = default;

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(path(key), "expected a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key, 0.0);
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(path(key), "expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }

  template <typename T>
  std::optional<std::vector<T>> list(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = obj_.at(key);
    if (!v.is_array()) throw ConfigError(path(key), "expected an array");
    std::vector<T> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto& e = v[i];
      const std::string p = path(key) + "[" + std::to_string(i) + "]";
      if constexpr (std::is_integral_v<T>) {
        if (!e.is_number_integer()) throw ConfigError(p, "expected an integer");
      } else {
        if (!e.is_number()) throw ConfigError(p, "expected a number");
      }
      out.push_back(e.get<T>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError(path(key), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

PhotonDirection direction_from_string(const std::string& s, const std::string& path) {
  if (s == "+axis") return PhotonDirection::plus_axis;
  if (s == "-axis") return PhotonDirection::minus_axis;
  throw ConfigError(path, "expected \"+axis\" or \"-axis\"");
}

std::string to_string(PhotonDirection d) { return d == PhotonDirection::plus_axis ? "+axis" : "-axis"; }

PacketConfig parse_packet(const json& obj, const std::string& path, PacketConfig fallback) {
  ObjectReader r(obj, path);
  PacketConfig p = fallback;
  p.center_over_N = r.number("center_over_N", p.center_over_N);
  require(p.center_over_N > 0.0 && p.center_over_N <= 1.0, r.path("center_over_N"), "must lie in (0, 1]");
  const bool has_carrier = r.has("carrier");
  p.carrier = r.number("carrier", p.carrier);
  require(std::abs(p.carrier) <= kPi, r.path("carrier"), "must lie in [-pi, pi]");
  p.storage.reset();
  if (r.has("storage")) {
    require(!has_carrier, r.path("storage"), "give either carrier or storage, not both");
    ObjectReader g(r.raw("storage"), r.path("storage"));
    StorageGeometry geom;
    geom.k_photon = g.number("k_photon_rad_per_m", geom.k_photon);
    geom.k_control = g.number("k_control_rad_per_m", geom.k_control);
    geom.theta_c = g.number("theta_c", geom.theta_c);
    geom.direction = direction_from_string(g.string("direction", "+axis"), g.path("direction"));
    g.finish();
    require(geom.k_photon > 0.0, g.path("k_photon_rad_per_m"), "must be positive");
    require(geom.k_control > 0.0, g.path("k_control_rad_per_m"), "must be positive");
    require(geom.theta_c >= 0.0 && geom.theta_c <= kPi, g.path("theta_c"), "must lie in [0, pi]");
    p.storage = geom;
  }
  r.finish();
  return p;
}

json packet_json(const PacketConfig& p) {
  json j;
  j["center_over_N"] = p.center_over_N;
  if (p.storage) {
    j["carrier"] = nullptr;
    j["storage"] = {{"k_photon_rad_per_m", p.storage->k_photon},
                    {"k_control_rad_per_m", p.storage->k_control},
                    {"theta_c", p.storage->theta_c},
                    {"direction", to_string(p.storage->direction)}};
  } else {
    j["carrier"] = p.carrier;
    j["storage"] = nullptr;
  }
  return j;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig c;
  ObjectReader root(doc, "");

  if (root.has("chain")) {
    ObjectReader r(root.raw("chain"), "chain");
    c.chain.N = r.integer("N", c.chain.N);
    c.chain.a = r.number("a_m", c.chain.a);
    const auto b = r.string("boundary", "open");
    try {
      c.chain.boundary = boundary_from_string(b);
    } catch (const InvalidArgument& e) {
      throw ConfigError(r.path("boundary"), e.what());
    }
    r.finish();
  }
  require(c.chain.N >= 4, "chain.N", "must be an integer >= 4");
  require(c.chain.a > 0.0, "chain.a_m", "must be positive");

  const bool has_hubbard = root.has("hubbard");
  if (root.has("couplings")) {
    require(!has_hubbard, "couplings", "give either couplings or hubbard, not both");
    ObjectReader r(root.raw("couplings"), "couplings");
    c.couplings.J = kTwoPi * r.number("J_hz", 1.0);
    c.couplings.V = kTwoPi * r.number("V_hz", 0.0);
    r.finish();
  }
  if (has_hubbard) {
    ObjectReader r(root.raw("hubbard"), "hubbard");
    HubbardParams h;
    h.t_g = kTwoPi * r.number("t_g_hz", 0.0);
    h.t_s = kTwoPi * r.number("t_s_hz", 0.0);
    h.U_gg = kTwoPi * r.number("U_gg_hz", 1.0);
    h.U_ss = kTwoPi * r.number("U_ss_hz", 1.0);
    h.U_sg = kTwoPi * r.number("U_sg_hz", 1.0);
    r.finish();
    try {
      c.couplings = derive_couplings(h);
    } catch (const InvalidArgument& e) {
      throw ConfigError("hubbard", e.what());
    }
    c.hubbard = h;
  }

  if (root.has("packets")) {
    ObjectReader r(root.raw("packets"), "packets");
    c.sigma_over_N = r.number("sigma_over_N", c.sigma_over_N);
    if (r.has("R")) c.R = parse_packet(r.raw("R"), r.path("R"), c.R);
    if (r.has("L")) c.L = parse_packet(r.raw("L"), r.path("L"), c.L);
    r.finish();
  }
  require(c.sigma_over_N > 0.0, "packets.sigma_over_N", "must be positive");

  if (root.has("evolution")) {
    ObjectReader r(root.raw("evolution"), "evolution");
    c.tau_over_T = r.number("tau_over_T", c.tau_over_T);
    c.tau_s = r.optional_number("tau_s");
    c.tau_J = r.optional_number("tau_J");
    r.finish();
  }
  require(c.tau_over_T >= 0.0, "evolution.tau_over_T", "must be nonnegative");
  require(!(c.tau_s && c.tau_J), "evolution", "give at most one of tau_s and tau_J");
  require(!c.tau_s || *c.tau_s >= 0.0, "evolution.tau_s", "must be nonnegative");
  require(!c.tau_J || *c.tau_J >= 0.0, "evolution.tau_J", "must be nonnegative");

  if (root.has("propagation")) {
    ObjectReader r(root.raw("propagation"), "propagation");
    c.propagation.tol = r.number("tol", c.propagation.tol);
    try {
      c.propagation.method = propagator_from_string(r.string("method", "auto"));
    } catch (const InvalidArgument& e) {
      throw ConfigError(r.path("method"), e.what());
    }
    const int limit = r.integer("dense_limit", static_cast<int>(c.propagation.dense_limit));
    require(limit >= 0, r.path("dense_limit"), "must be nonnegative");
    c.propagation.dense_limit = static_cast<std::size_t>(limit);
    r.finish();
  }
  require(c.propagation.tol >= 1e-14 && c.propagation.tol <= 1e-6, "propagation.tol", "must lie in [1e-14, 1e-6]");

  if (root.has("experiment")) {
    ObjectReader r(root.raw("experiment"), "experiment");
    auto& e = c.experiment;
    e.eta = r.number("eta", e.eta);
    e.N = r.integer("N", e.N);
    e.Gamma = kTwoPi * r.number("Gamma_hz", e.Gamma / kTwoPi);
    e.gamma0 = r.number("gamma0_per_s", e.gamma0);
    e.T_p = r.number("T_p_s", e.T_p);
    e.U = kTwoPi * r.number("U_hz", e.U / kTwoPi);
    e.tU_ratio_sq = r.number("tU_ratio_sq", e.tU_ratio_sq);
    r.finish();
    try {
      e.validate();
    } catch (const InvalidArgument& ex) {
      throw ConfigError("experiment", ex.what());
    }
  }

  if (root.has("sweep")) {
    ObjectReader r(root.raw("sweep"), "sweep");
    c.sweep.V_over_2J = r.list<double>("V_over_2J");
    c.sweep.N = r.list<int>("N");
    c.sweep.sigma_over_N = r.list<double>("sigma_over_N");
    r.finish();
    if (c.sweep.N) {
      for (std::size_t i = 0; i < c.sweep.N->size(); ++i) {
        require((*c.sweep.N)[i] >= 4, "sweep.N[" + std::to_string(i) + "]", "must be >= 4");
      }
    }
    if (c.sweep.sigma_over_N) {
      for (std::size_t i = 0; i < c.sweep.sigma_over_N->size(); ++i) {
        require((*c.sweep.sigma_over_N)[i] > 0.0, "sweep.sigma_over_N[" + std::to_string(i) + "]", "must be positive");
      }
    }
  }

  if (root.has("output")) {
    ObjectReader r(root.raw("output"), "output");
    c.out_dir = r.string("dir", c.out_dir);
    c.record_timing = r.boolean("record_timing", c.record_timing);
    r.finish();
  }
  c.threads = root.integer("threads", c.threads);
  require(c.threads >= 1, "threads", "must be >= 1");

  if (root.has("units")) {
    ObjectReader r(root.raw("units"), "units");
    require(r.string("frequency_input", "Hz") == "Hz", r.path("frequency_input"), "only Hz is supported");
    require(r.string("internal", "rad/s") == "rad/s", r.path("internal"), "only rad/s is supported");
    r.number("factor", kTwoPi);
    r.finish();
  }
  root.has("derived");  // informational block written by echo_config; ignored
  root.finish();

  if (!c.tau_s) require(c.couplings.J > 0.0, c.hubbard ? "hubbard" : "couplings.J_hz", "J must be positive");

  // Building the base spec validates packets and timing together.
  try {
    const auto spec = gate_spec(c);
    spec.R.validate();
    spec.L.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("packets", e.what());
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json echo_config(const RunConfig& c) {
  json j;
  j["chain"] = {{"N", c.chain.N}, {"a_m", c.chain.a}, {"boundary", to_string(c.chain.boundary)}};
  if (c.hubbard) {
    j["couplings"] = nullptr;
    j["hubbard"] = {{"t_g_hz", c.hubbard->t_g / kTwoPi}, {"t_s_hz", c.hubbard->t_s / kTwoPi},
                    {"U_gg_hz", c.hubbard->U_gg / kTwoPi}, {"U_ss_hz", c.hubbard->U_ss / kTwoPi},
                    {"U_sg_hz", c.hubbard->U_sg / kTwoPi}};
  } else {
    j["couplings"] = {{"J_hz", c.couplings.J / kTwoPi}, {"V_hz", c.couplings.V / kTwoPi}};
    j["hubbard"] = nullptr;
  }
  j["packets"] = {{"sigma_over_N", c.sigma_over_N}, {"R", packet_json(c.R)}, {"L", packet_json(c.L)}};
  j["evolution"] = {{"tau_over_T", c.tau_over_T},
                    {"tau_s", c.tau_s ? json(*c.tau_s) : json(nullptr)},
                    {"tau_J", c.tau_J ? json(*c.tau_J) : json(nullptr)}};
  j["propagation"] = {{"tol", c.propagation.tol},
                      {"method", to_string(c.propagation.method)},
                      {"dense_limit", c.propagation.dense_limit}};
  const auto& e = c.experiment;
  j["experiment"] = {{"eta", e.eta},       {"N", e.N},         {"Gamma_hz", e.Gamma / kTwoPi},
                     {"gamma0_per_s", e.gamma0}, {"T_p_s", e.T_p}, {"U_hz", e.U / kTwoPi},
                     {"tU_ratio_sq", e.tU_ratio_sq}};
  auto opt_list = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  j["sweep"] = {{"V_over_2J", opt_list(c.sweep.V_over_2J)},
                {"N", opt_list(c.sweep.N)},
                {"sigma_over_N", opt_list(c.sweep.sigma_over_N)}};
  j["output"] = {{"dir", c.out_dir}, {"record_timing", c.record_timing}};
  j["threads"] = c.threads;
  j["units"] = {{"frequency_input", "Hz"}, {"internal", "rad/s"}, {"factor", kTwoPi}};

  json derived;
  derived["J_rad_per_s"] = c.couplings.J;
  derived["V_rad_per_s"] = c.couplings.V;
  derived["weak_tunneling_warning"] = c.hubbard ? c.hubbard->weak_tunneling_warning() : false;
  try {
    const auto spec = gate_spec(c);
    derived["tau_s"] = spec.resolved_tau();
    derived["R_carrier"] = spec.R.carrier;
    derived["L_carrier"] = spec.L.carrier;
    derived["sigma_sites"] = spec.R.sigma;
  } catch (const InvalidArgument&) {
    // J = 0: no transit time
  }
  j["derived"] = derived;
  return j;
}

GateRunSpec gate_spec(const RunConfig& c, std::optional<int> N, std::optional<double> sigma_over_N,
                      std::optional<double> V_over_2J) {
  GateRunSpec s;
  s.chain = c.chain;
  if (N) s.chain.N = *N;
  s.couplings = c.couplings;
  if (V_over_2J) s.couplings.V = *V_over_2J * 2.0 * c.couplings.J;
  const double sigma = (sigma_over_N ? *sigma_over_N : c.sigma_over_N) * s.chain.N;

  auto packet = [&](const PacketConfig& p) {
    PacketSpec spec;
    spec.chain = s.chain;
    spec.center = p.center_over_N * s.chain.N;
    spec.sigma = sigma;
    spec.carrier = p.storage ? storage_momentum(*p.storage, s.chain.a) : p.carrier;
    return spec;
  };
  s.R = packet(c.R);
  s.L = packet(c.L);

  if (c.tau_s) {
    s.tau = *c.tau_s;
  } else if (c.tau_J) {
    if (!(s.couplings.J > 0.0)) throw InvalidArgument("tau_J needs J > 0");
    s.tau = *c.tau_J / s.couplings.J;
  } else {
    s.tau = c.tau_over_T * transit_time(s.chain, s.couplings);
  }
  s.propagation = c.propagation;
  return s;
}

}  // namespace fermiswap::cli
