#include "potts/network.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "potts/errors.hpp"

namespace potts {

void GridSpec::validate() const {
  if (width < 3) throw ConfigError("must be at least 3, got " + std::to_string(width), "grid.width");
  if (height < 3) throw ConfigError("must be at least 3, got " + std::to_string(height), "grid.height");
}

RewiringProbability::RewiringProbability(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(fmt::format("must lie in [0, 1], got {}", p), "network.p_r");
}

Network::Network(std::vector<std::vector<AgentId>> contacts) {
  offsets_.reserve(contacts.size() + 1);
  offsets_.push_back(0);
  for (auto& row : contacts) {
    std::sort(row.begin(), row.end());
    targets_.insert(targets_.end(), row.begin(), row.end());
    offsets_.push_back(targets_.size());
  }
}

std::span<const AgentId> Network::contacts(AgentId agent) const {
  if (agent >= agents()) throw UsageError(fmt::format("agent {} out of range (N = {})", agent, agents()));
  return {targets_.data() + offsets_[agent], offsets_[agent + 1] - offsets_[agent]};
}

std::size_t Network::degree(AgentId agent) const { return contacts(agent).size(); }

bool Network::connected(AgentId a, AgentId b) const {
  const auto row = contacts(a);
  return std::binary_search(row.begin(), row.end(), b);
}

std::vector<std::pair<AgentId, AgentId>> Network::edge_list() const {
  std::vector<std::pair<AgentId, AgentId>> out;
  out.reserve(edges());
  for (AgentId a = 0; a < agents(); ++a) {
    for (AgentId b : contacts(a)) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

bool Network::is_consistent() const {
  if (targets_.size() % 2 != 0) return false;
  for (AgentId a = 0; a < agents(); ++a) {
    const auto row = contacts(a);
    if (row.empty()) return false;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] >= agents() || row[i] == a) return false;
      if (i > 0 && row[i] == row[i - 1]) return false;
      if (!connected(row[i], a)) return false;
    }
  }
  return true;
}

Network build_moore_lattice(const GridSpec& grid) {
  grid.validate();
  const auto w = static_cast<long>(grid.width);
  const auto h = static_cast<long>(grid.height);
  std::vector<std::vector<AgentId>> contacts(grid.agents());
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      auto& row = contacts[static_cast<std::size_t>(r * w + c)];
      row.reserve(8);
      for (long dr = -1; dr <= 1; ++dr) {
        for (long dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const long rr = r + dr;
          const long cc = c + dc;
          if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
          row.push_back(static_cast<AgentId>(rr * w + cc));
        }
      }
    }
  }
  return Network(std::move(contacts));
}

Network rewire(const Network& net, RewiringProbability p_r, RandomStream& rng) {
  const auto edges = net.edge_list();
  const auto n = static_cast<std::uint64_t>(net.agents());

  std::vector<std::vector<AgentId>> adj(net.agents());
  for (AgentId a = 0; a < net.agents(); ++a) {
    const auto row = net.contacts(a);
    adj[a].assign(row.begin(), row.end());
  }
  auto linked = [&adj](AgentId a, AgentId b) {
    return std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end();
  };
  auto unlink = [&adj](AgentId a, AgentId b) {
    auto& row = adj[a];
    row.erase(std::find(row.begin(), row.end(), b));
  };

  for (const auto& [keep, drop] : edges) {
    if (rng.uniform01() >= p_r.value()) continue;
    if (adj[drop].size() == 1) continue;
    AgentId target = 0;
    do {
      target = static_cast<AgentId>(rng.bounded(n));
    } while (target == keep || linked(keep, target));
    unlink(keep, drop);
    unlink(drop, keep);
    adj[keep].push_back(target);
    adj[target].push_back(keep);
  }
  return Network(std::move(adj));
}

Network rewire(const Network& net, RewiringProbability p_r, std::uint64_t seed) {
  RandomStream rng(seed, StreamDomain::kRewire);
  return rewire(net, p_r, rng);
}

double clustering_coefficient(const Network& net) {
  if (net.agents() == 0) return 0.0;
  double total = 0.0;
  for (AgentId a = 0; a < net.agents(); ++a) {
    const auto row = net.contacts(a);
    const std::size_t k = row.size();
    if (k < 2) continue;
    std::size_t links = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        if (net.connected(row[i], row[j])) ++links;
      }
    }
    total += 2.0 * static_cast<double>(links) / static_cast<double>(k * (k - 1));
  }
  return total / static_cast<double>(net.agents());
}

void write_edge_list(std::ostream& out, const Network& net, std::uint64_t seed, double p_r) {
  fmt::print(out, "# nodes={} edges={} seed={} p_r={}\n", net.agents(), net.edges(), seed, p_r);
  for (const auto& [a, b] : net.edge_list()) fmt::print(out, "{} {}\n", a, b);
}

}  // namespace potts
