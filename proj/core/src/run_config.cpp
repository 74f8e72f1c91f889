#include "spingas/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "spingas/errors.hpp"
#include "spingas/io.hpp"
#include "spingas/presets.hpp"

namespace spingas {

const std::vector<std::string>& known_series() {
  static const std::vector<std::string> names = {
      "sigma2", "ctot",  "cbar",   "entropy",
      "diag_entropy", "probs", "parity", "concurrence"};
  return names;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct Cursor {
  const std::string* origin;
  int line = 0;

  ConfigError fail(const std::string& what) const {
    return ConfigError(*origin + ":" + std::to_string(line) + ": " + what);
  }
};

std::int64_t parse_int(const Cursor& at, const std::string& v) {
  std::int64_t out = 0;
  const char* b = v.data();
  const char* e = b + v.size();
  const auto res = std::from_chars(b, e, out);
  if (res.ec != std::errc() || res.ptr != e) {
    throw at.fail("expected an integer, got '" + v + "'");
  }
  return out;
}

std::uint64_t parse_u64(const Cursor& at, const std::string& v) {
  std::uint64_t out = 0;
  const char* b = v.data();
  const char* e = b + v.size();
  const auto res = std::from_chars(b, e, out);
  if (res.ec != std::errc() || res.ptr != e) {
    throw at.fail("expected a nonnegative integer, got '" + v + "'");
  }
  return out;
}

double parse_double(const Cursor& at, const std::string& v) {
  double out = 0.0;
  const char* b = v.data();
  const char* e = b + v.size();
  const auto res = std::from_chars(b, e, out);
  if (res.ec != std::errc() || res.ptr != e) {
    throw at.fail("expected a number, got '" + v + "'");
  }
  return out;
}

Complex parse_complex_term(const Cursor& at, const std::string& term) {
  const std::string t = trim(term);
  if (t.empty()) throw at.fail("empty amplitude");
  if (t.front() == '(') {
    if (t.back() != ')') throw at.fail("unbalanced '(' in '" + t + "'");
    const std::string inner = t.substr(1, t.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) {
      throw at.fail("expected '(re,im)', got '" + t + "'");
    }
    return Complex(parse_double(at, trim(inner.substr(0, comma))),
                   parse_double(at, trim(inner.substr(comma + 1))));
  }
  return Complex(parse_double(at, t), 0.0);
}

// Splits "a,b" at commas outside parentheses.
std::vector<std::string> split_amplitudes(const Cursor& at,
                                          const std::string& v) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (const char c : v) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw at.fail("unbalanced ')' in '" + v + "'");
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0) throw at.fail("unbalanced '(' in '" + v + "'");
  parts.push_back(cur);
  return parts;
}

InitialStateSpec parse_initial(const Cursor& at, const std::string& v) {
  InitialStateSpec spec;
  const auto colon = v.find(':');
  if (colon == std::string::npos) {
    throw at.fail("initial state must be k:<index>, bits:<string>, or "
                  "super:<c0>,<c1>");
  }
  const std::string tag = trim(v.substr(0, colon));
  const std::string rest = trim(v.substr(colon + 1));
  if (tag == "k") {
    spec.kind = InitialStateSpec::Kind::SingleExcitation;
    const std::int64_t k = parse_int(at, rest);
    if (k < 1) throw at.fail("particle index is 1-based");
    spec.excited = static_cast<int>(k - 1);
  } else if (tag == "bits") {
    spec.kind = InitialStateSpec::Kind::Computational;
    spec.bits = rest;
    if (spec.bits.empty()) throw at.fail("empty bit string");
  } else if (tag == "super") {
    spec.kind = InitialStateSpec::Kind::Superposition;
    const auto parts = split_amplitudes(at, rest);
    if (parts.size() != 2) {
      throw at.fail("superposition needs exactly two amplitudes");
    }
    spec.c0 = parse_complex_term(at, parts[0]);
    spec.c1 = parse_complex_term(at, parts[1]);
  } else {
    throw at.fail("unknown initial-state tag '" + tag + "'");
  }
  return spec;
}

Eigen::Vector3d parse_box(const Cursor& at, const std::string& v) {
  std::istringstream is(v);
  std::vector<double> vals;
  std::string tok;
  while (is >> tok) vals.push_back(parse_double(at, tok));
  if (vals.size() == 1) return Eigen::Vector3d::Constant(vals[0]);
  if (vals.size() == 3) return Eigen::Vector3d(vals[0], vals[1], vals[2]);
  throw at.fail("box needs one edge length or three");
}

struct ParserState {
  RunConfig cfg;
  bool has_model = false;
  bool has_quantum = false;
  bool saw_kind = false;
  bool saw_particles = false;
  bool saw_sites = false;
  bool saw_steps = false;
  bool saw_box = false;
  bool saw_sigma = false;
  bool saw_traj = false;
  bool saw_seed = false;
  bool saw_samples = false;
  bool saw_snapshots = false;
  bool engine_auto = true;
};

void apply_model_key(ParserState& st, const Cursor& at, const std::string& key,
                     const std::string& value) {
  ModelSpec& m = st.cfg.plan.model;
  if (key == "kind") {
    st.saw_kind = true;
    if (value == "random-pairs") {
      m.kind = ModelSpec::Kind::RandomPairs;
    } else if (value == "chain") {
      m.kind = ModelSpec::Kind::Chain;
    } else if (value == "lattice-gas") {
      m.kind = ModelSpec::Kind::LatticeGas;
    } else if (value == "billiard") {
      m.kind = ModelSpec::Kind::Billiard;
    } else {
      throw at.fail("unknown model kind '" + value + "'");
    }
  } else if (key == "particles") {
    st.saw_particles = true;
    m.particles = static_cast<int>(parse_int(at, value));
  } else if (key == "sites") {
    st.saw_sites = true;
    m.sites = static_cast<int>(parse_int(at, value));
  } else if (key == "lattice_init") {
    if (value == "block") {
      m.lattice_init = ModelSpec::LatticeInit::Block;
    } else if (value == "uniform-random") {
      m.lattice_init = ModelSpec::LatticeInit::UniformRandom;
    } else {
      throw at.fail("lattice_init must be block or uniform-random");
    }
  } else if (key == "diameter") {
    m.diameter = parse_double(at, value);
  } else if (key == "mass") {
    m.mass = parse_double(at, value);
  } else if (key == "velocity_sigma") {
    st.saw_sigma = true;
    m.velocity_sigma = parse_double(at, value);
  } else if (key == "box") {
    st.saw_box = true;
    m.box = parse_box(at, value);
  } else {
    throw at.fail("unknown key '" + key + "' in [model]");
  }
}

void apply_quantum_key(ParserState& st, const Cursor& at,
                       const std::string& key, const std::string& value) {
  TrajectoryPlan& plan = st.cfg.plan;
  if (key == "coupling") {
    if (value == "xx") {
      plan.coupling = Coupling::XX;
    } else if (value == "xxx") {
      plan.coupling = Coupling::XXX;
    } else if (value == "ising") {
      plan.coupling = Coupling::Ising;
    } else {
      throw at.fail("coupling must be xx, xxx, or ising");
    }
  } else if (key == "eta") {
    plan.eta = parse_double(at, value);
  } else if (key == "engine") {
    if (value == "auto") {
      st.engine_auto = true;
    } else if (value == "subspace") {
      st.engine_auto = false;
      plan.engine = EngineKind::Subspace;
    } else if (value == "full") {
      st.engine_auto = false;
      plan.engine = EngineKind::Full;
    } else {
      throw at.fail("engine must be auto, subspace, or full");
    }
  } else if (key == "initial") {
    plan.initial_state = parse_initial(at, value);
  } else if (key == "steps") {
    st.saw_steps = true;
    plan.steps = parse_int(at, value);
  } else {
    throw at.fail("unknown key '" + key + "' in [quantum]");
  }
}

void apply_ensemble_key(ParserState& st, const Cursor& at,
                        const std::string& key, const std::string& value) {
  TrajectoryPlan& plan = st.cfg.plan;
  if (key == "trajectories") {
    st.saw_traj = true;
    plan.n_traj = static_cast<int>(parse_int(at, value));
  } else if (key == "seed") {
    st.saw_seed = true;
    plan.seed = parse_u64(at, value);
  } else if (key == "samples") {
    st.saw_samples = true;
    st.cfg.sample_cap = parse_int(at, value);
    if (st.cfg.sample_cap < 1) throw at.fail("samples must be >= 1");
  } else {
    throw at.fail("unknown key '" + key + "' in [ensemble]");
  }
}

void apply_output_key(ParserState& st, const Cursor& at,
                      const std::string& key, const std::string& value) {
  if (key == "snapshots") {
    st.saw_snapshots = true;
    if (value == "none") {
      st.cfg.snapshots = RunConfig::Snapshots::None;
    } else if (value == "final") {
      st.cfg.snapshots = RunConfig::Snapshots::Final;
    } else if (value == "all") {
      st.cfg.snapshots = RunConfig::Snapshots::All;
    } else {
      throw at.fail("snapshots must be none, final, or all");
    }
  } else if (key == "series") {
    st.cfg.series.clear();
    if (value == "all") return;
    std::istringstream is(value);
    std::string name;
    while (std::getline(is, name, ',')) {
      name = trim(name);
      const auto& known = known_series();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw at.fail("unknown series '" + name + "'");
      }
      st.cfg.series.push_back(name);
    }
    if (st.cfg.series.empty()) throw at.fail("empty series list");
  } else {
    throw at.fail("unknown key '" + key + "' in [output]");
  }
}

}  // namespace

RunConfig parse_run_config_text(const std::string& text,
                                const std::string& origin) {
  ParserState st;
  Cursor at{&origin, 0};
  std::string section;  // empty = top level
  int preset_line = 0;

  std::istringstream is(text);
  std::string raw;
  while (std::getline(is, raw)) {
    ++at.line;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw at.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section == "model") {
        st.has_model = true;
      } else if (section == "quantum") {
        st.has_quantum = true;
      } else if (section != "ensemble" && section != "output") {
        throw at.fail("unknown section [" + section + "]");
      }
      if (!st.cfg.preset.empty() && (section == "model" || section == "quantum")) {
        throw at.fail("preset and [" + section + "] are mutually exclusive");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw at.fail("expected key = value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw at.fail("missing key before '='");
    if (value.empty()) throw at.fail("missing value for '" + key + "'");

    if (section.empty()) {
      if (key == "preset") {
        if (st.has_model || st.has_quantum) {
          throw at.fail("preset and [model]/[quantum] are mutually exclusive");
        }
        st.cfg.preset = value;
        preset_line = at.line;
      } else {
        throw at.fail("unknown top-level key '" + key +
                      "' (only 'preset' is allowed outside sections)");
      }
    } else if (section == "model") {
      apply_model_key(st, at, key, value);
    } else if (section == "quantum") {
      apply_quantum_key(st, at, key, value);
    } else if (section == "ensemble") {
      apply_ensemble_key(st, at, key, value);
    } else {
      apply_output_key(st, at, key, value);
    }
  }

  if (!st.cfg.preset.empty()) {
    // Preset supplies model + quantum; this config may override the
    // ensemble/output sections on top of it.
    Cursor pat{&origin, preset_line};
    RunConfig merged;
    try {
      merged = preset_config(st.cfg.preset);
    } catch (const ConfigError& e) {
      throw pat.fail(e.what());
    }
    if (st.saw_traj) merged.plan.n_traj = st.cfg.plan.n_traj;
    if (st.saw_seed) merged.plan.seed = st.cfg.plan.seed;
    if (st.saw_samples) merged.sample_cap = st.cfg.sample_cap;
    if (st.saw_snapshots) merged.snapshots = st.cfg.snapshots;
    if (!st.cfg.series.empty()) merged.series = st.cfg.series;
    return merged;
  }

  // Manual config: check required fields, reporting all at once.
  std::string missing;
  const auto need = [&](bool seen, const char* what) {
    if (!seen) {
      if (!missing.empty()) missing += ", ";
      missing += what;
    }
  };
  need(st.saw_kind, "[model] kind");
  need(st.saw_particles, "[model] particles");
  if (st.saw_kind && st.cfg.plan.model.kind == ModelSpec::Kind::LatticeGas) {
    need(st.saw_sites, "[model] sites");
  }
  if (st.saw_kind && st.cfg.plan.model.kind == ModelSpec::Kind::Billiard) {
    need(st.saw_box, "[model] box");
    need(st.saw_sigma, "[model] velocity_sigma");
  }
  need(st.saw_steps, "[quantum] steps");
  if (!missing.empty()) {
    throw ConfigError(origin + ": missing required fields: " + missing);
  }

  if (st.engine_auto) {
    st.cfg.plan.engine =
        (st.cfg.plan.coupling == Coupling::XX &&
         st.cfg.plan.initial_state.kind ==
             InitialStateSpec::Kind::SingleExcitation)
            ? EngineKind::Subspace
            : EngineKind::Full;
  }
  return st.cfg;
}

RunConfig parse_run_config_file(const std::filesystem::path& path) {
  return parse_run_config_text(read_text_file(path), path.string());
}

void finalize_run_config(RunConfig& cfg) {
  if (cfg.plan.sample_times.empty()) {
    cfg.plan.sample_times =
        default_sample_times(cfg.plan.steps, cfg.sample_cap);
  }
  cfg.plan.validate();
}

}  // namespace spingas
