#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wl1/basis.hpp"

namespace wl1 {

/// How the separation xi treats the interval ends. Jacobi reflects the
/// outermost nodes (t_0 = -t_1 - 2, t_{N+1} = 2 - t_N); Fourier uses the
/// endpoints themselves (t_0 = -1, t_{N+1} = 1).
enum class GhostRule { Jacobi, Fourier };

GhostRule default_ghost_rule(const Basis& basis);

struct Cell {
  double lo;
  double hi;
};

/// Sorted scattered nodes on [-1, 1] with their Voronoi cells, quadrature
/// weights tau_n (measure of each cell under the basis measure), fill
/// distance h and ghost-point separation xi. Immutable after construction.
class PointSet {
 public:
  /// Throws on empty input, unsorted input, points outside [-1, 1] and
  /// duplicate points.
  static PointSet build(std::vector<double> points, const Basis& measure,
                        GhostRule rule);
  static PointSet build(std::vector<double> points, const Basis& measure) {
    return build(std::move(points), measure, default_ghost_rule(measure));
  }

  Index size() const noexcept { return static_cast<Index>(points_.size()); }
  const std::vector<double>& points() const noexcept { return points_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const std::vector<double>& tau() const noexcept { return tau_; }
  double h() const noexcept { return h_; }
  double xi() const noexcept { return xi_; }
  /// xi == 0: an endpoint node coincides with its ghost reflection.
  bool degenerate() const noexcept { return xi_ == 0.0; }
  GhostRule ghost_rule() const noexcept { return rule_; }
  const Basis& measure() const noexcept { return measure_; }

 private:
  PointSet(const Basis& measure, GhostRule rule) : measure_(measure), rule_(rule) {}

  std::vector<double> points_;
  std::vector<Cell> cells_;
  std::vector<double> tau_;
  double h_ = 0.0;
  double xi_ = 0.0;
  Basis measure_;
  GhostRule rule_;
};

enum class GridKind { Equispaced, Jittered, UniformRandom, Chebyshev };

struct GridSpec {
  GridKind kind = GridKind::Equispaced;
  /// Jitter amplitude in units of half the equispaced spacing.
  double amplitude = 1.0;
};

GridKind parse_grid_kind(const std::string& text);
std::string to_string(GridKind kind);

/// Node sets on [-1, 1], ascending and deterministic for a given seed.
/// Equispaced: t_n = -1 + 2(n-1)/(N-1) (N = 1 gives {0}). Jittered: each
/// equispaced node moved by U(-1, 1) * amplitude * spacing / 2, clipped to
/// [-1, 1], sorted; coincident nodes created by clipping are dropped.
/// Chebyshev: extrema -cos(pi (n-1)/(N-1)).
std::vector<double> generate_points(const GridSpec& spec, Index count, std::uint64_t seed);

/// sum_n tau_n f_n conj(g_n).
Complex discrete_inner_product(const PointSet& ps, std::span<const Complex> f,
                               std::span<const Complex> g);
double discrete_inner_product(const PointSet& ps, std::span<const double> f,
                              std::span<const double> g);

/// One coordinate per line, ascending.
std::vector<double> read_points(std::istream& in);
std::vector<double> read_points_file(const std::string& path);
void write_points(std::ostream& out, std::span<const double> points);

}  // namespace wl1
