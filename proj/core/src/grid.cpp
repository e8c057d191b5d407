#include "wl1/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "wl1/error.hpp"

namespace wl1 {

GhostRule default_ghost_rule(const Basis& basis) {
  return basis.is_fourier() ? GhostRule::Fourier : GhostRule::Jacobi;
}

PointSet PointSet::build(std::vector<double> points, const Basis& measure,
                         GhostRule rule) {
  if (points.empty()) throw Error(ErrorKind::Empty, "empty point set");
  for (std::size_t n = 0; n < points.size(); ++n) {
    if (!std::isfinite(points[n]) || points[n] < -1.0 || points[n] > 1.0) {
      throw Error(ErrorKind::Domain, "point outside [-1, 1]");
    }
    if (n > 0 && points[n] == points[n - 1]) {
      throw Error(ErrorKind::DegenerateGrid, "duplicate points");
    }
    if (n > 0 && points[n] < points[n - 1]) {
      throw Error(ErrorKind::Domain, "points must be sorted ascending");
    }
  }

  PointSet ps(measure, rule);
  ps.points_ = std::move(points);
  const std::size_t count = ps.points_.size();
  const auto& t = ps.points_;

  ps.cells_.resize(count);
  for (std::size_t n = 0; n < count; ++n) {
    ps.cells_[n].lo = n == 0 ? -1.0 : 0.5 * (t[n - 1] + t[n]);
    ps.cells_[n].hi = n + 1 == count ? 1.0 : 0.5 * (t[n] + t[n + 1]);
  }

  // tau_n from differences of the measure's distribution function, so the
  // weights telescope to one.
  ps.tau_.resize(count);
  for (std::size_t n = 0; n < count; ++n) {
    ps.tau_[n] = measure.measure(ps.cells_[n].lo, ps.cells_[n].hi);
  }

  double h = std::max(t.front() + 1.0, 1.0 - t.back());
  for (std::size_t n = 1; n < count; ++n) h = std::max(h, 0.5 * (t[n] - t[n - 1]));
  ps.h_ = h;

  const double ghost_lo = rule == GhostRule::Jacobi ? -t.front() - 2.0 : -1.0;
  const double ghost_hi = rule == GhostRule::Jacobi ? 2.0 - t.back() : 1.0;
  double gap = std::min(t.front() - ghost_lo, ghost_hi - t.back());
  for (std::size_t n = 1; n < count; ++n) gap = std::min(gap, t[n] - t[n - 1]);
  ps.xi_ = 0.5 * gap;
  return ps;
}

GridKind parse_grid_kind(const std::string& text) {
  if (text == "equispaced") return GridKind::Equispaced;
  if (text == "jittered") return GridKind::Jittered;
  if (text == "uniform" || text == "uniform_random" || text == "random") {
    return GridKind::UniformRandom;
  }
  if (text == "chebyshev") return GridKind::Chebyshev;
  throw Error(ErrorKind::Domain, "unknown grid kind '" + text + "'");
}

std::string to_string(GridKind kind) {
  switch (kind) {
    case GridKind::Equispaced: return "equispaced";
    case GridKind::Jittered: return "jittered";
    case GridKind::UniformRandom: return "uniform_random";
    case GridKind::Chebyshev: return "chebyshev";
  }
  return "unknown";
}

std::vector<double> generate_points(const GridSpec& spec, Index count,
                                    std::uint64_t seed) {
  if (count < 1) throw Error(ErrorKind::Empty, "grid needs at least one point");
  const auto n_points = static_cast<std::size_t>(count);
  std::vector<double> t(n_points);
  auto equispaced = [&] {
    if (n_points == 1) {
      t[0] = 0.0;
      return;
    }
    for (std::size_t n = 0; n < n_points; ++n) {
      t[n] = -1.0 + 2.0 * static_cast<double>(n) / static_cast<double>(n_points - 1);
    }
    t.back() = 1.0;
  };

  switch (spec.kind) {
    case GridKind::Equispaced:
      equispaced();
      break;
    case GridKind::Chebyshev:
      if (n_points == 1) {
        t[0] = 0.0;
        break;
      }
      for (std::size_t n = 0; n < n_points; ++n) {
        t[n] = -std::cos(std::numbers::pi * static_cast<double>(n) /
                         static_cast<double>(n_points - 1));
      }
      t.front() = -1.0;
      t.back() = 1.0;
      break;
    case GridKind::Jittered: {
      equispaced();
      if (spec.amplitude == 0.0) break;
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      const double spacing = n_points > 1 ? 2.0 / static_cast<double>(n_points - 1) : 2.0;
      for (auto& x : t) {
        x = std::clamp(x + unit(rng) * spec.amplitude * 0.5 * spacing, -1.0, 1.0);
      }
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
      break;
    }
    case GridKind::UniformRandom: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      for (auto& x : t) x = unit(rng);
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
      break;
    }
  }
  return t;
}

Complex discrete_inner_product(const PointSet& ps, std::span<const Complex> f,
                               std::span<const Complex> g) {
  if (f.size() != ps.tau().size() || g.size() != ps.tau().size()) {
    throw Error(ErrorKind::Dimension, "value lists must have one entry per point");
  }
  Complex sum = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) sum += ps.tau()[n] * f[n] * std::conj(g[n]);
  return sum;
}

double discrete_inner_product(const PointSet& ps, std::span<const double> f,
                              std::span<const double> g) {
  if (f.size() != ps.tau().size() || g.size() != ps.tau().size()) {
    throw Error(ErrorKind::Dimension, "value lists must have one entry per point");
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) sum += ps.tau()[n] * f[n] * g[n];
  return sum;
}

std::vector<double> read_points(std::istream& in) {
  std::vector<double> points;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double value = 0.0;
    if (!(fields >> value)) throw Error(ErrorKind::Data, "malformed point line: " + line);
    points.push_back(value);
  }
  return points;
}

std::vector<double> read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_points(in);
}

void write_points(std::ostream& out, std::span<const double> points) {
  const auto old = out.precision(17);
  for (double t : points) out << t << '\n';
  out.precision(old);
}

}  // namespace wl1
