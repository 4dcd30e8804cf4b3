#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "potts/random.hpp"

namespace potts {

using AgentId = std::uint32_t;

/// Lattice dimensions. Agents are numbered 0..N-1 in row-major order.
struct GridSpec {
  std::size_t width = 200;
  std::size_t height = 200;

  std::size_t agents() const noexcept { return width * height; }

  /// Throws ConfigError unless both sides are at least 3.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Per-edge rewiring probability, validated to [0, 1].
class RewiringProbability {
 public:
  explicit RewiringProbability(double p);
  double value() const noexcept { return p_; }

 private:
  double p_;
};

/// Undirected, unweighted, loop-free contact graph stored as sorted adjacency rows.
class Network {
 public:
  Network() = default;

  /// Builds from per-agent contact lists. Lists are sorted; symmetry is the caller's job
  /// (checked by `is_consistent`).
  explicit Network(std::vector<std::vector<AgentId>> contacts);

  std::size_t agents() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edges() const noexcept { return targets_.size() / 2; }

  std::span<const AgentId> contacts(AgentId agent) const;
  std::size_t degree(AgentId agent) const;
  bool connected(AgentId a, AgentId b) const;

  /// Undirected edges (a, b) with a < b in lexicographic order.
  std::vector<std::pair<AgentId, AgentId>> edge_list() const;

  /// Symmetric, no self-loops, no duplicates, every degree >= 1.
  bool is_consistent() const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<AgentId> targets_;
};

/// Moore (8-neighbour) lattice without periodic boundaries.
Network build_moore_lattice(const GridSpec& grid);

/// Watts-Strogatz style rewiring of a finished network.
///
/// Reproducibility contract: the input's edges are visited once each in
/// lexicographic (smaller endpoint, larger endpoint) order. Each visit draws
/// exactly one uniform01 value from `rng`; when it is below p_r the edge keeps
/// its smaller endpoint and the larger one is replaced by `rng.bounded(N)`,
/// redrawn until the candidate is neither the kept endpoint nor already one of
/// its contacts. An edge whose dropped endpoint has degree 1 is left in place
/// (its uniform draw is still consumed) so no agent is ever isolated.
Network rewire(const Network& net, RewiringProbability p_r, RandomStream& rng);

/// Convenience overload: stream derived from (seed, kRewire).
Network rewire(const Network& net, RewiringProbability p_r, std::uint64_t seed);

/// Mean local clustering coefficient (agents of degree < 2 contribute 0).
double clustering_coefficient(const Network& net);

/// Edge dump: header "# nodes=N edges=E seed=S p_r=P" then "a b" per edge, a < b.
void write_edge_list(std::ostream& out, const Network& net, std::uint64_t seed, double p_r);

}  // namespace potts
