#include "biot/app/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "biot/errors.hpp"

namespace biot::app {

namespace {

namespace pt = boost::property_tree;

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

std::optional<double> to_double(const std::string& s) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || std::isnan(v)) return std::nullopt;
  return v;
}

std::optional<int> to_int(const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    return std::nullopt;
  return static_cast<int>(v);
}

class Reader {
 public:
  explicit Reader(pt::ptree tree) : tree_(std::move(tree)) {}

  void error(const std::string& field, const std::string& msg) { errors_.push_back(field + ": " + msg); }
  const std::vector<std::string>& errors() const { return errors_; }

  std::optional<std::string> raw(const std::string& sec, const std::string& key) {
    const auto s = tree_.find(sec);
    if (s == tree_.not_found()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.not_found()) return std::nullopt;
    used_.insert(sec + "." + key);
    return k->second.data();
  }

  std::optional<double> number(const std::string& sec, const std::string& key) {
    const auto r = raw(sec, key);
    if (!r) return std::nullopt;
    const auto v = to_double(*r);
    if (!v) error(sec + "." + key, "expected a number, got '" + *r + "'");
    return v;
  }

  double number(const std::string& sec, const std::string& key, double fallback) {
    return number(sec, key).value_or(fallback);
  }

  std::optional<int> integer(const std::string& sec, const std::string& key) {
    const auto r = raw(sec, key);
    if (!r) return std::nullopt;
    const auto v = to_int(*r);
    if (!v) error(sec + "." + key, "expected an integer, got '" + *r + "'");
    return v;
  }

  /// `count` numbers, or any count when count < 0.
  std::optional<std::vector<double>> numbers(const std::string& sec, const std::string& key, int count) {
    const auto r = raw(sec, key);
    if (!r) return std::nullopt;
    std::vector<double> out;
    for (const auto& w : split_ws(*r)) {
      const auto v = to_double(w);
      if (!v) {
        error(sec + "." + key, "expected numbers, got '" + *r + "'");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    if (count >= 0 && static_cast<int>(out.size()) != count) {
      error(sec + "." + key, "expected " + std::to_string(count) + " values, got " + std::to_string(out.size()));
      return std::nullopt;
    }
    return out;
  }

  /// Keys of a section of the form name@suffix.
  std::vector<std::pair<std::string, std::string>> suffixed(const std::string& sec, const std::string& name) {
    std::vector<std::pair<std::string, std::string>> out;
    const auto s = tree_.find(sec);
    if (s == tree_.not_found()) return out;
    const std::string prefix = name + "@";
    for (const auto& [k, v] : s->second)
      if (k.rfind(prefix, 0) == 0) out.emplace_back(k.substr(prefix.size()), k);
    return out;
  }

  void check_unknown(const std::set<std::string>& sections) {
    for (const auto& [sec, body] : tree_) {
      if (!sections.count(sec)) {
        error(sec, "unknown section");
        continue;
      }
      for (const auto& [k, v] : body)
        if (!used_.count(sec + "." + k)) error(sec + "." + k, "unknown key");
    }
  }

 private:
  pt::ptree tree_;
  std::vector<std::string> errors_;
  std::set<std::string> used_;
};

std::optional<TimeScheme> parse_label(const std::string& s) {
  if (s.size() < 3) return std::nullopt;
  const std::string fam = s.substr(0, 2);
  const auto k = to_int(s.substr(2));
  if (!k) return std::nullopt;
  if (fam == "dg" && *k >= 0) return TimeScheme::dg(*k);
  if (fam == "cg" && *k >= 1) return TimeScheme::cg(*k);
  return std::nullopt;
}

void read_material_keys(Reader& r, const std::string& sec, const std::string& suffix, MaterialParams& m) {
  auto key = [&](const std::string& k) { return suffix.empty() ? k : k + "@" + suffix; };
  auto set = [&](const std::string& k, double& dst) {
    if (auto v = r.number(sec, key(k))) dst = *v;
  };
  set("lambda", m.lambda);
  set("mu", m.mu);
  set("alpha", m.alpha_b);
  set("M", m.M);
  set("eta", m.eta);
  set("phi", m.phi);
  set("rho_f", m.rho_f);
  set("rho_s", m.rho_s);
  if (auto v = r.number(sec, key("K_dr"))) m.K_dr = *v;
  if (auto v = r.numbers(sec, key("K"), -1)) {
    if (v->size() == 1)
      m.K = Vec3::Constant((*v)[0]);
    else if (v->size() == 3)
      m.K = Vec3((*v)[0], (*v)[1], (*v)[2]);
    else
      r.error(sec + "." + key("K"), "expected 1 or 3 values");
  }
}

}  // namespace

std::vector<TimeScheme> parse_schemes(const std::string& spec, int N) {
  const auto words = split_ws(spec);
  if (words.empty()) throw ConfigError("time.scheme: empty");
  if (words.size() == 1 && words[0].find('*') == std::string::npos) {
    if (words[0] == "scheme1") {
      if (N < 1) throw ConfigError("time.scheme: no slabs");
      std::vector<TimeScheme> s(N, TimeScheme::cg(1));
      s[0] = TimeScheme::dg(1);
      return s;
    }
    if (const auto l = parse_label(words[0])) return std::vector<TimeScheme>(N, *l);
    throw ConfigError("time.scheme: unknown scheme '" + words[0] + "'");
  }
  std::vector<TimeScheme> out;
  for (const auto& w : words) {
    const auto star = w.find('*');
    const auto l = parse_label(w.substr(0, star));
    if (!l) throw ConfigError("time.scheme: unknown scheme '" + w.substr(0, star) + "'");
    int count = 1;
    if (star != std::string::npos) {
      const auto c = to_int(w.substr(star + 1));
      if (!c || *c < 1) throw ConfigError("time.scheme: bad repeat count in '" + w + "'");
      count = *c;
    }
    out.insert(out.end(), count, *l);
  }
  if (static_cast<int>(out.size()) != N)
    throw ConfigError("time.scheme: list covers " + std::to_string(out.size()) + " slabs, grid has " +
                      std::to_string(N));
  return out;
}

void set_schemes(RunConfig& cfg, const std::string& spec) {
  TimeGrid g = TimeGrid::uniform(cfg.T, cfg.N, TimeScheme::dg(0));
  g.schemes = parse_schemes(spec, cfg.N);
  cfg.scenario.grid = std::move(g);
  cfg.schemes = spec;
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  Reader r(std::move(tree));
  RunConfig cfg;
  cfg.source = source;
  bench::Scenario& sc = cfg.scenario;

  // [mesh]
  int dim = 0;
  if (auto d = r.integer("mesh", "dimension")) {
    if (*d == 2 || *d == 3)
      dim = *d;
    else
      r.error("mesh.dimension", "must be 2 or 3");
  } else {
    r.error("mesh.dimension", "missing");
  }
  std::vector<double> extents;
  if (dim) {
    if (auto e = r.numbers("mesh", "extents", dim)) {
      extents = *e;
      for (double v : extents)
        if (!(v > 0.0) || !std::isfinite(v)) r.error("mesh.extents", "must be positive");
    } else if (!r.raw("mesh", "extents")) {
      r.error("mesh.extents", "missing");
    }
    if (auto e = r.numbers("mesh", "divisions", dim)) {
      for (double v : *e) {
        if (v < 1 || v != std::floor(v)) r.error("mesh.divisions", "must be positive integers");
        sc.divisions.push_back(static_cast<int>(v));
      }
    } else if (!r.raw("mesh", "divisions")) {
      r.error("mesh.divisions", "missing");
    }
  }
  sc.extents = extents;
  if (auto o = r.integer("mesh", "order")) {
    if (*o != 1 && *o != 2) r.error("mesh.order", "must be 1 or 2");
    sc.order = *o;
  }

  // [boundary]
  if (dim) {
    for (int s = 0; s < 6; ++s) {
      const Side side = static_cast<Side>(s);
      const std::string name(side_name(side));
      const auto v = r.raw("boundary", name);
      if (s >= 2 * dim) {
        if (v) r.error("boundary." + name, "side does not exist in " + std::to_string(dim) + "d");
        continue;
      }
      if (!v) {
        r.error("boundary." + name, "missing");
        continue;
      }
      const auto w = split_ws(*v);
      if (w.size() != 2) {
        r.error("boundary." + name, "expected '<pressure|flux> <roller|clamped|free>'");
        continue;
      }
      FlowBC flow = FlowBC::Flux;
      if (w[0] == "pressure")
        flow = FlowBC::Pressure;
      else if (w[0] != "flux")
        r.error("boundary." + name, "unknown flow condition '" + w[0] + "'");
      if (w[1] == "roller")
        sc.boundary.sides[side] = BoundarySpec::roller(side, flow);
      else if (w[1] == "clamped")
        sc.boundary.sides[side] = BoundarySpec::clamped(flow);
      else if (w[1] == "free")
        sc.boundary.sides[side] = BoundarySpec::free(flow);
      else
        r.error("boundary." + name, "unknown mechanical condition '" + w[1] + "'");
    }
  }

  // [material]
  MaterialParams base;
  read_material_keys(r, "material", "", base);
  try {
    base.validate();
  } catch (const Error& e) {
    r.error("material", e.what());
  }
  sc.materials = CellMaterials(base);
  long n_cells = 1;
  for (int n : sc.divisions) n_cells *= n;
  std::set<std::string> cells;
  for (const char* k : {"lambda", "mu", "alpha", "M", "eta", "phi", "rho_f", "rho_s", "K_dr", "K"})
    for (const auto& [suffix, full] : r.suffixed("material", k)) cells.insert(suffix);
  for (const auto& c : cells) {
    const auto id = to_int(c);
    if (!id || *id < 0 || *id >= n_cells) {
      r.error("material.*@" + c, "cell index out of range");
      for (const char* k : {"lambda", "mu", "alpha", "M", "eta", "phi", "rho_f", "rho_s", "K_dr", "K"})
        r.raw("material", std::string(k) + "@" + c);
      continue;
    }
    MaterialParams m = base;
    read_material_keys(r, "material", c, m);
    try {
      m.validate();
    } catch (const Error& e) {
      r.error("material@" + c, e.what());
    }
    sc.materials.set(*id, m);
  }

  // [loads]
  bool step = true;
  if (auto m = r.raw("loads", "mode")) {
    if (*m == "constant")
      step = false;
    else if (*m != "step")
      r.error("loads.mode", "must be 'step' or 'constant'");
  }
  std::map<Side, double> pressures;
  std::map<Side, Vec3> tractions;
  for (const auto& [suffix, full] : r.suffixed("loads", "pressure")) {
    const auto side = parse_side(suffix);
    const auto v = r.number("loads", full);
    if (!side || static_cast<int>(*side) >= 2 * dim) {
      r.error("loads." + full, "unknown side");
      continue;
    }
    auto it = sc.boundary.sides.find(*side);
    if (it != sc.boundary.sides.end() && it->second.flow != FlowBC::Pressure)
      r.error("loads." + full, "side is not a pressure boundary");
    if (v) pressures[*side] = *v;
  }
  for (const auto& [suffix, full] : r.suffixed("loads", "traction")) {
    const auto side = parse_side(suffix);
    const auto v = r.numbers("loads", full, 3);
    if (!side || static_cast<int>(*side) >= 2 * dim) {
      r.error("loads." + full, "unknown side");
      continue;
    }
    if (v) tractions[*side] = Vec3((*v)[0], (*v)[1], (*v)[2]);
  }
  Vec3 gravity = Vec3::Zero();
  if (auto g = r.numbers("loads", "gravity", 3)) gravity = Vec3((*g)[0], (*g)[1], (*g)[2]);
  const double f = r.number("loads", "source", 0.0);
  auto on = [step](double t) { return !step || t > 0.0; };
  if (!pressures.empty())
    sc.data.pressure = [pressures, on](const Point&, double t, Side s) {
      const auto it = pressures.find(s);
      return it != pressures.end() && on(t) ? it->second : 0.0;
    };
  if (!tractions.empty())
    sc.data.traction = [tractions, on](const Point&, double t, Side s) {
      const auto it = tractions.find(s);
      return it != tractions.end() && on(t) ? it->second : Vec3::Zero().eval();
    };
  if (gravity.squaredNorm() > 0.0) sc.data.gravity = [gravity](const Point&, double) { return gravity; };
  if (f != 0.0) sc.data.source = [f, on](const Point&, double t) { return on(t) ? f : 0.0; };

  // [initial]
  const double p0 = r.number("initial", "pressure", 0.0);
  Vec3 u0 = Vec3::Zero();
  if (dim)
    if (auto u = r.numbers("initial", "displacement", dim))
      for (int a = 0; a < dim; ++a) u0[a] = (*u)[a];
  const auto stress = r.numbers("initial", "stress", 3);
  if (gravity.squaredNorm() > 0.0 && !stress && !r.raw("initial", "stress"))
    r.error("initial.stress", "required when loads.gravity is nonzero");
  sc.reference.p0 = [p0](const Point&) { return p0; };
  sc.reference.u0 = [u0](const Point&) { return u0; };
  const double alpha = base.alpha_b;
  if (stress) {
    const Mat3 s0 = Vec3((*stress)[0], (*stress)[1], (*stress)[2]).asDiagonal();
    sc.reference.sigma0 = [s0](const Point&) { return s0; };
  } else {
    const int dd = dim;
    sc.reference.sigma0 = [p0, alpha, dd](const Point&) {
      Mat3 s = Mat3::Zero();
      for (int a = 0; a < dd; ++a) s(a, a) = -alpha * p0;
      return s;
    };
  }

  // [time]
  const auto T = r.number("time", "T");
  const auto N = r.integer("time", "N");
  const auto tau = r.number("time", "tau");
  if (!T)
    r.error("time.T", "missing");
  else if (!(*T > 0.0) || !std::isfinite(*T))
    r.error("time.T", "must be positive");
  if (N && tau)
    r.error("time", "give exactly one of N and tau, not both");
  else if (!N && !tau && !r.raw("time", "N") && !r.raw("time", "tau"))
    r.error("time", "give exactly one of N and tau");
  if (N && *N < 1) r.error("time.N", "must be at least 1");
  if (tau && !(*tau > 0.0)) r.error("time.tau", "must be positive");
  if (T && *T > 0.0) {
    cfg.T = *T;
    if (N && !tau && *N >= 1) cfg.N = *N;
    if (tau && !N && *tau > 0.0) {
      const double n = *T / *tau;
      const long rn = std::lround(n);
      if (rn < 1 || std::abs(n - rn) > 1e-9 * n)
        r.error("time.tau", "must divide T into a whole number of slabs");
      else
        cfg.N = static_cast<int>(rn);
    }
  }
  const std::string spec = r.raw("time", "scheme").value_or("dg0");
  if (cfg.N > 0) {
    try {
      set_schemes(cfg, spec);
    } catch (const ConfigError& e) {
      for (const auto& i : e.issues()) r.error("time.scheme", i.substr(i.find(": ") + 2));
    }
  }

  // [split]
  if (auto k = r.number("split", "K_dr_star")) {
    if (!(*k > 0.0)) r.error("split.K_dr_star", "must be positive");
    sc.split.K_dr_star = *k;
  }
  sc.split.tol = r.number("split", "tol", sc.split.tol);
  if (!(sc.split.tol > 0.0)) r.error("split.tol", "must be positive");
  if (auto m = r.integer("split", "max_iterations")) {
    if (*m < 1) r.error("split.max_iterations", "must be at least 1");
    sc.split.max_iterations = *m;
  }
  sc.split.residual_factor = r.number("split", "residual_factor", sc.split.residual_factor);
  if (!(sc.split.residual_factor > 0.0)) r.error("split.residual_factor", "must be positive");

  // [output]
  if (auto d = r.raw("output", "directory")) {
    if (d->empty()) r.error("output.directory", "empty");
    cfg.output_dir = *d;
  }
  if (auto s = r.numbers("output", "snapshots", -1)) {
    cfg.snapshots = *s;
    for (double t : cfg.snapshots)
      if (t < 0.0 || (cfg.T > 0.0 && t > cfg.T * (1.0 + 1e-12))) r.error("output.snapshots", "times must lie in [0, T]");
  }
  if (dim && extents.size() == static_cast<std::size_t>(dim)) {
    Point from = Point::Zero(), to = Point::Zero();
    for (int a = 1; a < dim; ++a) from[a] = to[a] = 0.5 * extents[a];
    to[0] = extents[0];
    auto point = [&](const std::string& key, Point& dst) {
      if (auto v = r.numbers("output", key, 3)) {
        dst = Point((*v)[0], (*v)[1], (*v)[2]);
        for (int a = 0; a < 3; ++a) {
          const double hi = a < dim ? extents[a] : 0.0;
          if (dst[a] < -1e-12 || dst[a] > hi + 1e-12) r.error("output." + key, "point lies outside the domain");
        }
      }
    };
    point("line_from", from);
    point("line_to", to);
    sc.line.from = from;
    sc.line.to = to;
  }
  if (auto n = r.integer("output", "line_samples")) {
    if (*n < 1) r.error("output.line_samples", "must be at least 1");
    sc.line.samples = *n;
  }

  r.check_unknown({"mesh", "boundary", "loads", "material", "initial", "time", "split", "output"});
  if (!r.errors().empty()) throw ConfigError(r.errors());
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

}  // namespace biot::app
