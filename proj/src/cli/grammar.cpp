#include "confspec/cli/grammar.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "confspec/errors.hpp"
#include "confspec/inequality_lab.hpp"

namespace confspec::cli {

namespace {

struct Parsed {
  std::string kind;
  std::string rest;
  std::map<std::string, std::string> keys;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Parsed parse_head(const std::string& s, std::vector<std::string>& errs, bool keyed = true) {
  Parsed p;
  const auto colon = s.find(':');
  p.kind = s.substr(0, colon);
  if (colon == std::string::npos) return p;
  p.rest = s.substr(colon + 1);
  if (!keyed || p.rest.empty()) return p;
  for (const auto& item : split(p.rest, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      errs.push_back("'" + s + "': expected key=value, got '" + item + "'");
      continue;
    }
    const std::string key = item.substr(0, eq);
    if (p.keys.count(key)) errs.push_back("'" + s + "': key '" + key + "' given twice");
    p.keys[key] = item.substr(eq + 1);
  }
  return p;
}

bool to_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool to_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

class Reader {
 public:
  Reader(const Parsed& p, std::string ctx, std::vector<std::string>& errs)
      : p_(p), ctx_(std::move(ctx)), errs_(errs) {}

  void real(const std::string& key, double& out) {
    used(key);
    auto it = p_.keys.find(key);
    if (it != p_.keys.end() && !to_double(it->second, out))
      errs_.push_back(ctx_ + ": '" + key + "' is not a number: '" + it->second + "'");
  }
  void integer(const std::string& key, int& out) {
    used(key);
    auto it = p_.keys.find(key);
    if (it != p_.keys.end() && !to_int(it->second, out))
      errs_.push_back(ctx_ + ": '" + key + "' is not an integer: '" + it->second + "'");
  }
  void list(const std::string& key, std::vector<double>& out) {
    used(key);
    auto it = p_.keys.find(key);
    if (it == p_.keys.end()) return;
    out.clear();
    for (const auto& part : split(it->second, '/')) {
      double v;
      if (!to_double(part, v)) {
        errs_.push_back(ctx_ + ": '" + key + "' has a non-numeric entry '" + part + "'");
        return;
      }
      out.push_back(v);
    }
  }
  void text(const std::string& key, std::string& out) {
    used(key);
    auto it = p_.keys.find(key);
    if (it != p_.keys.end()) out = it->second;
  }
  bool has(const std::string& key) const { return p_.keys.count(key) > 0; }
  void finish() {
    for (const auto& [k, v] : p_.keys)
      if (!used_.count(k)) errs_.push_back(ctx_ + ": unknown key '" + k + "'");
  }

 private:
  void used(const std::string& k) { used_[k] = true; }
  const Parsed& p_;
  std::string ctx_;
  std::vector<std::string>& errs_;
  std::map<std::string, bool> used_;
};

void require(bool ok, std::vector<std::string>& errs, const std::string& msg) {
  if (!ok) errs.push_back(msg);
}

}  // namespace

std::vector<double> parse_grid(const std::string& s) {
  std::vector<std::string> errs;
  std::vector<double> out;
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    double v;
    if (!to_double(s, v)) throw ConfigError({"grid '" + s + "': not a number"});
    return {v};
  }
  const std::string lo_s = s.substr(0, dots);
  std::string hi_s = s.substr(dots + 2);
  int count = 0;
  const auto colon = hi_s.find(':');
  if (colon == std::string::npos) {
    errs.push_back("grid '" + s + "': expected a..b:count");
  } else {
    if (!to_int(hi_s.substr(colon + 1), count) || count < 1) errs.push_back("grid '" + s + "': bad count");
    hi_s = hi_s.substr(0, colon);
  }
  double lo = 0, hi = 0;
  if (!to_double(lo_s, lo)) errs.push_back("grid '" + s + "': bad lower end");
  if (!to_double(hi_s, hi)) errs.push_back("grid '" + s + "': bad upper end");
  if (!errs.empty()) throw ConfigError(errs);
  if (count == 1) return {lo};
  for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
  return out;
}

std::vector<int> parse_int_range(const std::string& s) {
  const auto dots = s.find("..");
  int lo = 0, hi = 0;
  if (dots == std::string::npos) {
    if (!to_int(s, lo)) throw ConfigError({"range '" + s + "': not an integer"});
    return {lo};
  }
  if (!to_int(s.substr(0, dots), lo) || !to_int(s.substr(dots + 2), hi) || hi < lo)
    throw ConfigError({"range '" + s + "': expected a..b with integers a <= b"});
  std::vector<int> out;
  for (int k = lo; k <= hi; ++k) out.push_back(k);
  return out;
}

ModelSpec parse_model(const std::string& s) {
  std::vector<std::string> errs;
  Parsed p = parse_head(s, errs);
  ModelSpec m;
  m.kind = p.kind;
  m.text = s;
  Reader r(p, "model '" + s + "'", errs);
  if (m.kind == "sphere") {
    m.n = 4;
    r.integer("n", m.n);
    r.real("r", m.radius);
    r.integer("N", m.nodes);
    require(m.n >= 2, errs, "model '" + s + "': n must be at least 2");
    require(m.radius > 0, errs, "model '" + s + "': r must be positive");
    require(m.nodes >= 16, errs, "model '" + s + "': N must be at least 16");
  } else if (m.kind == "torus") {
    m.n = 4;
    r.integer("n", m.n);
    std::vector<double> L{1.0};
    r.list("L", L);
    r.integer("modes", m.modes);
    require(m.n >= 2, errs, "model '" + s + "': n must be at least 2");
    if (L.size() == 1 && m.n >= 2) L.assign(m.n, L[0]);
    if (r.has("L") && L.size() != static_cast<std::size_t>(m.n))
      errs.push_back("model '" + s + "': L lists " + std::to_string(L.size()) + " lengths for n=" + std::to_string(m.n));
    for (double l : L) require(l > 0, errs, "model '" + s + "': lengths must be positive");
    require(m.modes >= 8 && m.modes % 2 == 0, errs, "model '" + s + "': modes must be even and at least 8");
    m.lengths = L;
  } else if (m.kind == "icosphere") {
    m.n = 2;
    r.integer("level", m.level);
    r.real("r", m.radius);
    require(m.level >= 0 && m.level <= 7, errs, "model '" + s + "': level must be in 0..7");
    require(m.radius > 0, errs, "model '" + s + "': r must be positive");
  } else if (m.kind == "ellipsoid") {
    m.n = 2;
    m.axes = {1.0, 1.0, 1.5};
    r.integer("level", m.level);
    r.list("axes", m.axes);
    require(m.level >= 0 && m.level <= 7, errs, "model '" + s + "': level must be in 0..7");
    require(m.axes.size() == 3, errs, "model '" + s + "': axes needs three values");
    for (double a : m.axes) require(a > 0, errs, "model '" + s + "': axes must be positive");
  } else if (m.kind == "revolution") {
    m.n = 2;
    m.nu = 32;
    m.nv = 16;
    r.integer("nu", m.nu);
    r.integer("nv", m.nv);
    r.real("R", m.major);
    r.real("r", m.minor);
    require(m.nu >= 3 && m.nv >= 3, errs, "model '" + s + "': nu and nv must be at least 3");
    require(m.major > m.minor && m.minor > 0, errs, "model '" + s + "': need R > r > 0");
  } else if (m.kind == "genus2") {
    m.n = 2;
    r.integer("nu", m.nu);
    r.integer("nv", m.nv);
    require(m.nu >= 8 && m.nu % 2 == 0, errs, "model '" + s + "': nu must be even and at least 8");
    require(m.nv >= 4, errs, "model '" + s + "': nv must be at least 4");
  } else if (m.kind == "off") {
    m.n = 2;
    r.text("path", m.path);
    require(!m.path.empty(), errs, "model '" + s + "': off needs path=FILE");
  } else {
    errs.push_back("model '" + s + "': unknown kind '" + m.kind +
                   "' (sphere, torus, icosphere, ellipsoid, revolution, genus2, off)");
  }
  r.finish();
  if (!errs.empty()) throw ConfigError(errs);
  return m;
}

ModelManifold ModelSpec::manifold() const {
  if (kind == "sphere") return ModelManifold::round_sphere(n, radius);
  if (kind == "torus") return ModelManifold::flat_torus(lengths);
  if (kind == "icosphere") return ModelManifold::tri_mesh(meshes::icosphere(level, radius));
  if (kind == "ellipsoid") return ModelManifold::tri_mesh(meshes::ellipsoid(level, {axes[0], axes[1], axes[2]}));
  if (kind == "revolution") return ModelManifold::tri_mesh(meshes::torus_of_revolution(nu, nv, major, minor));
  if (kind == "genus2") return ModelManifold::tri_mesh(meshes::genus_two(nu, nv));
  return ModelManifold::tri_mesh(read_off_file(path));
}

SpacePtr ModelSpec::build() const {
  if (kind == "sphere") return build_zonal_sphere(n, radius, nodes);
  if (kind == "torus") return build_torus(lengths, modes);
  return build_trimesh(manifold());
}

DeformationSpec parse_deformation(const std::string& s) {
  std::vector<std::string> errs;
  DeformationSpec d;
  d.text = s;
  const auto colon = s.find(':');
  d.kind = s.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (d.kind == "const") {
    if (!to_double(rest, d.value)) errs.push_back("deformation '" + s + "': const needs a number");
  } else if (d.kind == "cos") {
    Parsed p = parse_head(s, errs);
    Reader r(p, "deformation '" + s + "'", errs);
    r.real("amp", d.amplitude);
    r.integer("mode", d.mode);
    r.real("c", d.value);
    r.finish();
    require(d.mode >= 0, errs, "deformation '" + s + "': mode must be nonnegative");
  } else if (d.kind == "file") {
    d.path = rest;
    require(!d.path.empty(), errs, "deformation '" + s + "': file needs a path");
  } else {
    errs.push_back("deformation '" + s + "': unknown kind '" + d.kind + "' (const, cos, file)");
  }
  if (std::abs(d.value) + std::abs(d.amplitude) > ConformalMetric::kMaxAmplitude)
    errs.push_back("deformation '" + s + "': |u| may exceed " + std::to_string(ConformalMetric::kMaxAmplitude));
  if (!errs.empty()) throw ConfigError(errs);
  return d;
}

ScalarField DeformationSpec::sample(const DiscreteSpace& space) const {
  if (kind == "const") return space.constant(value);
  if (kind == "cos") return (cosine_deformation(space, amplitude, mode).array() + value).matrix();
  std::ifstream in(path);
  if (!in) throw ConfigError({"deformation file '" + path + "' cannot be read"});
  std::vector<double> vals;
  double v;
  while (in >> v) vals.push_back(v);
  if (!in.eof()) throw ConfigError({"deformation file '" + path + "' contains a non-numeric entry"});
  if (static_cast<Eigen::Index>(vals.size()) != space.node_count())
    throw ConfigError({"deformation file '" + path + "' has " + std::to_string(vals.size()) + " values, the space has " +
                       std::to_string(space.node_count()) + " nodes"});
  return Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

FamilySpec parse_family(const std::string& s) {
  std::vector<std::string> errs;
  Parsed p = parse_head(s, errs);
  FamilySpec f;
  f.kind = p.kind;
  f.text = s;
  Reader r(p, "family '" + s + "'", errs);
  auto grid = [&](const std::string& key, std::vector<double>& out) {
    std::string t;
    r.text(key, t);
    if (t.empty()) {
      errs.push_back("family '" + s + "': missing '" + key + "'");
      return;
    }
    try {
      out = parse_grid(t);
    } catch (const ConfigError& e) {
      errs.insert(errs.end(), e.violations().begin(), e.violations().end());
    }
  };
  if (f.kind == "cos") {
    std::string modes;
    r.text("modes", modes);
    try {
      f.modes = parse_int_range(modes.empty() ? "1" : modes);
    } catch (const ConfigError& e) {
      errs.insert(errs.end(), e.violations().begin(), e.violations().end());
    }
    grid("amp", f.amplitudes);
    for (int m : f.modes) require(m >= 0, errs, "family '" + s + "': modes must be nonnegative");
  } else if (f.kind == "const") {
    grid("c", f.amplitudes);
  } else if (f.kind == "random") {
    r.integer("count", f.count);
    r.real("amp", f.max_amplitude);
    r.integer("modes", f.max_mode);
    require(f.count >= 1, errs, "family '" + s + "': count must be at least 1");
    require(f.max_mode >= 1, errs, "family '" + s + "': modes must be at least 1");
    require(f.max_amplitude >= 0 && f.max_amplitude <= 1.0, errs, "family '" + s + "': amp must be in [0, 1]");
  } else {
    errs.push_back("family '" + s + "': unknown kind '" + f.kind + "' (cos, const, random)");
  }
  r.finish();
  for (double a : f.amplitudes)
    require(std::abs(a) <= ConformalMetric::kMaxAmplitude, errs,
            "family '" + s + "': amplitude " + std::to_string(a) + " exceeds the admissible range");
  if (!errs.empty()) throw ConfigError(errs);
  return f;
}

std::vector<std::pair<std::string, ScalarField>> FamilySpec::expand(const DiscreteSpace& space,
                                                                     std::uint64_t seed) const {
  std::vector<std::pair<std::string, ScalarField>> out;
  auto num = [](double v) {
    std::ostringstream o;
    o << v;
    return o.str();
  };
  if (kind == "cos") {
    for (int m : modes)
      for (double a : amplitudes)
        out.emplace_back("cos:amp=" + num(a) + ",mode=" + std::to_string(m), cosine_deformation(space, a, m));
  } else if (kind == "const") {
    for (double c : amplitudes) out.emplace_back("const:" + num(c), space.constant(c));
  } else {
    auto fields = random_deformations(space, count, seed, max_amplitude, max_mode);
    for (std::size_t i = 0; i < fields.size(); ++i)
      out.emplace_back("random:" + std::to_string(i), std::move(fields[i]));
  }
  return out;
}

}  // namespace confspec::cli
