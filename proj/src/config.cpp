#include <cmath>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "nsac/errors.hpp"
#include "nsac/field_io.hpp"
#include "nsac/harness.hpp"

namespace nsac {

namespace {

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::BadConfig, "key '" + key + "': expected a number, got '" + s + "'");
  }
}

std::size_t to_size(const std::string& key, const std::string& s) {
  const double v = to_double(key, s);
  if (v < 0.0 || v != std::floor(v)) throw Error(ErrorCode::BadConfig, "key '" + key + "': expected a count");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw Error(ErrorCode::BadConfig, "key '" + key + "': expected true or false");
}

const std::string& single(const CLI::ConfigItem& it) {
  if (it.inputs.size() != 1) throw Error(ErrorCode::BadConfig, "key '" + it.fullname() + "' expects one value");
  return it.inputs.front();
}

std::vector<double> numbers(const CLI::ConfigItem& it) {
  std::vector<double> v;
  for (const auto& s : it.inputs) v.push_back(to_double(it.fullname(), s));
  return v;
}

std::size_t nice_size(std::size_t n) {
  for (;; ++n) {
    std::size_t m = n;
    for (std::size_t p : {2, 3, 5})
      while (m % p == 0) m /= p;
    if (m == 1) return n;
  }
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::StationaryCircle: return "stationary_circle";
    case Scenario::TwoCircles: return "two_circles";
    case Scenario::FlatInterface: return "flat_interface";
    case Scenario::CoupledNSAC: return "coupled_nsac";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& name) {
  for (auto s : {Scenario::StationaryCircle, Scenario::TwoCircles, Scenario::FlatInterface, Scenario::CoupledNSAC})
    if (to_string(s) == name) return s;
  throw Error(ErrorCode::BadConfig, "unknown scenario '" + name + "'");
}

ExperimentConfig parse_config(std::istream& in) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw Error(ErrorCode::BadConfig, std::string("config syntax: ") + e.what());
  }
  ExperimentConfig c;
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--") continue;
    const std::string key = it.fullname();
    if (key == "scenario") c.scenario = scenario_from_string(single(it));
    else if (key == "eps_list") c.eps_list = numbers(it);
    else if (key == "eps") c.eps_list = {to_double(key, single(it))};
    else if (key == "lx") c.lx = to_double(key, single(it));
    else if (key == "ly") c.ly = to_double(key, single(it));
    else if (key == "bc") {
      const auto& v = single(it);
      if (v == "periodic") c.bc = BoundaryCondition::Periodic;
      else if (v == "walls") c.bc = BoundaryCondition::WallNeumannNoSlip;
      else throw Error(ErrorCode::BadConfig, "bc must be 'periodic' or 'walls'");
    } else if (key == "grid") c.grid = to_size(key, single(it));
    else if (key == "cells_per_eps") c.cells_per_eps = to_double(key, single(it));
    else if (key == "grid_exponent") c.grid_exponent = to_double(key, single(it));
    else if (key == "t_end") c.t_end = to_double(key, single(it));
    else if (key == "steps") c.steps = to_size(key, single(it));
    else if (key == "dt") c.dt = to_double(key, single(it));
    else if (key == "dt_factor") c.dt_factor = to_double(key, single(it));
    else if (key == "potential") {
      if (it.inputs.size() == 1 && it.inputs[0] == "standard") c.potential = Potential::standard_quartic();
      else {
        const auto coeffs = numbers(it);
        c.potential = Potential::user_polynomial(coeffs);
      }
    } else if (key == "nu_plus") c.nu_plus = to_double(key, single(it));
    else if (key == "nu_minus") c.nu_minus = to_double(key, single(it));
    else if (key == "order") {
      const auto o = to_size(key, single(it));
      if (o > 1) throw Error(ErrorCode::BadConfig, "order must be 0 or 1");
      c.order = static_cast<int>(o);
    } else if (key == "lambda0") c.lambda0 = to_double(key, single(it));
    else if (key == "centers") {
      const auto v = numbers(it);
      if (v.size() % 2 != 0) throw Error(ErrorCode::BadConfig, "centers must hold x, y pairs");
      c.centers.clear();
      for (std::size_t k = 0; k < v.size(); k += 2) c.centers.emplace_back(v[k], v[k + 1]);
    } else if (key == "radii") c.radii = numbers(it);
    else if (key == "axes") {
      const auto v = numbers(it);
      if (v.size() != 2) throw Error(ErrorCode::BadConfig, "axes must hold two semi-axes");
      c.axis_a = v[0];
      c.axis_b = v[1];
    } else if (key == "curve_samples") c.curve_samples = to_size(key, single(it));
    else if (key == "initial_curve") c.initial_curve = single(it);
    else if (key == "output_every") c.output_every = to_size(key, single(it));
    else if (key == "sample_every") c.sample_every = to_size(key, single(it));
    else if (key == "snapshots") c.snapshots = to_bool(key, single(it));
    else if (key == "out") c.out_dir = single(it);
    else throw Error(ErrorCode::BadConfig, "unknown config key '" + key + "'");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadConfig, "cannot open config " + path.string());
  return parse_config(in);
}

void ExperimentConfig::validate() const {
  if (eps_list.empty()) throw Error(ErrorCode::BadConfig, "eps_list is empty");
  for (double e : eps_list)
    if (!(e > 0.0)) throw Error(ErrorCode::BadConfig, "eps values must be positive");
  if (!(lx > 0.0) || !(ly > 0.0)) throw Error(ErrorCode::BadConfig, "domain lengths must be positive");
  if (!(t_end > 0.0) && steps == 0) throw Error(ErrorCode::BadConfig, "t_end or steps must be positive");
  if (dt < 0.0 || !(dt_factor > 0.0)) throw Error(ErrorCode::BadConfig, "dt must be positive");
  if (grid == 0 && !(cells_per_eps >= 2.0)) throw Error(ErrorCode::BadConfig, "cells_per_eps must be >= 2");
  if (grid_exponent < 0.0) throw Error(ErrorCode::BadConfig, "grid_exponent must be >= 0");
  if (!(nu_plus >= 0.0) || !(nu_minus >= 0.0)) throw Error(ErrorCode::BadConfig, "viscosities must be >= 0");
  if (output_every == 0 || sample_every == 0) throw Error(ErrorCode::BadConfig, "output intervals must be >= 1");
  if (curve_samples < 16) throw Error(ErrorCode::BadConfig, "curve_samples must be >= 16");
  if (!initial_curve.empty() && scenario == Scenario::FlatInterface)
    throw Error(ErrorCode::BadConfig, "initial_curve cannot be combined with flat_interface");
  if (initial_curve.empty()) switch (scenario) {
    case Scenario::StationaryCircle:
      if (centers.empty() || radii.empty()) throw Error(ErrorCode::BadConfig, "circle needs a center and a radius");
      break;
    case Scenario::TwoCircles:
      if (centers.size() != radii.size() || radii.size() < 2)
        throw Error(ErrorCode::BadConfig, "two_circles needs matching centers and radii");
      break;
    case Scenario::CoupledNSAC:
      if (centers.empty() || !(axis_a > 0.0) || !(axis_b > 0.0))
        throw Error(ErrorCode::BadConfig, "coupled_nsac needs a center and positive axes");
      break;
    case Scenario::FlatInterface:
      break;
  }
  for (double r : radii)
    if (!(r > 0.0)) throw Error(ErrorCode::BadConfig, "radii must be positive");
  for (double e : eps_list) (void)grid_for(e);
}

GridSpec ExperimentConfig::grid_for(double eps) const {
  std::size_t nx = grid;
  if (nx == 0) {
    double emax = 0.0;
    for (double e : eps_list) emax = std::max(emax, e);
    const double h = eps / cells_per_eps * std::pow(eps / emax, grid_exponent);
    nx = nice_size(static_cast<std::size_t>(std::ceil(lx / h - 1e-9)));
  }
  const double ny_real = static_cast<double>(nx) * ly / lx;
  const auto ny = static_cast<std::size_t>(std::llround(ny_real));
  if (std::abs(ny_real - static_cast<double>(ny)) > 1e-9)
    throw Error(ErrorCode::BadConfig, "grid does not give square cells for this domain");
  GridSpec g{nx, ny, lx, ly, bc};
  g.validate();
  if (g.h() > 0.5 * eps * (1.0 + 1e-12)) throw Error(ErrorCode::ResolutionTooCoarse, "grid spacing exceeds eps/2");
  return g;
}

double ExperimentConfig::dt_for(double eps) const { return dt > 0.0 ? dt : dt_factor * eps * eps; }

std::string ExperimentConfig::fingerprint() const {
  std::ostringstream os;
  os << "scenario=" << to_string(scenario) << ";eps=";
  for (double e : eps_list) os << format_double(e) << ' ';
  os << ";lx=" << format_double(lx) << ";ly=" << format_double(ly) << ";bc=" << (bc == BoundaryCondition::Periodic ? "periodic" : "walls")
     << ";grid=" << grid << ";cpe=" << format_double(cells_per_eps) << ";gexp=" << format_double(grid_exponent)
     << ";t_end=" << format_double(t_end) << ";steps=" << steps << ";dt=" << format_double(dt)
     << ";dtf=" << format_double(dt_factor) << ";potential=";
  for (double a : potential.coefficients()) os << format_double(a) << ' ';
  os << ";nu=" << format_double(nu_plus) << ',' << format_double(nu_minus) << ";order=" << order
     << ";lambda0=" << (lambda0 ? format_double(*lambda0) : "auto") << ";centers=";
  for (const auto& p : centers) os << format_double(p.x()) << ',' << format_double(p.y()) << ' ';
  os << ";radii=";
  for (double r : radii) os << format_double(r) << ' ';
  os << ";axes=" << format_double(axis_a) << ',' << format_double(axis_b) << ";samples=" << curve_samples
     << ";output_every=" << output_every << ";sample_every=" << sample_every
     << ";initial_curve=" << initial_curve.string();
  if (!initial_curve.empty()) {
    std::ifstream in(initial_curve);
    os << ';' << in.rdbuf();
  }
  return os.str();
}

}  // namespace nsac
