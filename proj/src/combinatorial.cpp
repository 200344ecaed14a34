#include "eda/combinatorial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "eda/error.hpp"

namespace eda {

void WeightedGraph::add_edge(std::uint32_t a, std::uint32_t b, double weight) {
  if (a == b) throw ConfigError("self-loop on node " + std::to_string(a));
  const auto u = std::min(a, b);
  const auto v = std::max(a, b);
  if (v >= nodes_) throw ConfigError("edge endpoint " + std::to_string(v) + " out of range");
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw ConfigError("edge weights must be finite and non-negative");
  const std::uint64_t key = static_cast<std::uint64_t>(u) * nodes_ + v;
  if (!seen_.insert(key).second) {
    throw ConfigError("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
  }
  edges_.push_back(Edge{u, v, weight});
}

double WeightedGraph::total_weight() const {
  double total = 0.0;
  for (const auto& e : edges_) total += e.weight;
  return total;
}

double cut_value(const WeightedGraph& g, const BitString& x) {
  if (x.size() != g.node_count()) {
    throw ConfigError("assignment length " + std::to_string(x.size()) + " differs from node count " +
                      std::to_string(g.node_count()));
  }
  double value = 0.0;
  for (const auto& e : g.edges()) {
    if (x.get(e.u) != x.get(e.v)) value += e.weight;
  }
  return value;
}

double brute_force_max_cut(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  if (n > 30) throw ConfigError("exhaustive max-cut is limited to 30 nodes");
  double best = 0.0;
  BitString x(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    x.words()[0] = mask;
    best = std::max(best, cut_value(g, x));
  }
  return best;
}

PlantedInstance planted_maxcut(std::size_t n, double cross_density, RngStream& rng) {
  if (n < 4 || n % 2 != 0) throw ConfigError("planted instances need an even node count >= 4");
  if (!(cross_density > 0.0 && cross_density <= 1.0)) throw ConfigError("cross density must lie in (0, 1]");
  const std::size_t half = n / 2;
  WeightedGraph g(n);
  for (std::size_t u = 0; u < half; ++u) {
    for (std::size_t v = half; v < n; ++v) {
      if (rng.uniform01() < cross_density) {
        g.add_edge(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), 1.0 + rng.uniform01());
      }
    }
  }
  BitString planted(n);
  for (std::size_t u = 0; u < half; ++u) planted.set(u, true);
  const double value = cut_value(g, planted);
  if (n <= 16 && brute_force_max_cut(g) != value) {
    throw ConfigError("planted assignment is not optimal");
  }
  return PlantedInstance{std::move(g), std::move(planted), value};
}

void constrained_partition_sample_into(const FrequencyVector& p, BipartitionConstraint constraint, RngStream& rng,
                                       BitString& out) {
  const std::size_t n = p.size();
  if (constraint.ones > n) {
    throw ConfigError("partition size " + std::to_string(constraint.ones) + " exceeds dimension " +
                      std::to_string(n));
  }
  if (out.size() != n) out = BitString(n);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  rng.shuffle(std::span<std::uint32_t>(order));
  std::size_t ones_left = constraint.ones;
  std::size_t zeros_left = n - constraint.ones;
  for (std::uint32_t j : order) {
    bool bit = false;
    if (ones_left == 0) {
      bit = false;
    } else if (zeros_left == 0) {
      bit = true;
    } else {
      bit = rng.uniform01() < p[j];
    }
    out.set(j, bit);
    if (bit) {
      --ones_left;
    } else {
      --zeros_left;
    }
  }
}

BitString constrained_partition_sample(const FrequencyVector& p, BipartitionConstraint constraint, RngStream& rng) {
  BitString x(p.size());
  constrained_partition_sample_into(p, constraint, rng, x);
  return x;
}

MaxCutObjective::MaxCutObjective(WeightedGraph graph, double optimal_value)
    : graph_(std::move(graph)), optimal_value_(optimal_value) {
  if (graph_.node_count() == 0) throw ConfigError("max-cut objective needs at least one node");
}

BipartitionObjective::BipartitionObjective(WeightedGraph graph, BipartitionConstraint constraint,
                                           double optimal_value)
    : MaxCutObjective(std::move(graph), optimal_value), constraint_(constraint) {
  if (constraint.ones > dimension()) throw ConfigError("partition size exceeds node count");
}

void BipartitionObjective::sample(const FrequencyVector& p, RngStream& rng, BitString& out) const {
  constrained_partition_sample_into(p, constraint_, rng, out);
}

void write_instance(std::ostream& os, const PlantedInstance& inst) {
  const auto& g = inst.graph;
  os << g.node_count() << ' ' << g.edges().size() << '\n';
  os << std::setprecision(17);
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << ' ' << e.weight << '\n';
  os << inst.planted_assignment.to_string() << '\n';
  os << inst.optimal_value << '\n';
}

PlantedInstance read_instance(std::istream& is) {
  std::size_t n = 0;
  std::size_t m = 0;
  if (!(is >> n >> m)) throw ConfigError("instance: missing 'n m' header");
  WeightedGraph g(n);
  for (std::size_t i = 0; i < m; ++i) {
    std::int64_t u = 0;
    std::int64_t v = 0;
    double w = 0.0;
    if (!(is >> u >> v >> w)) throw ConfigError("instance: edge line " + std::to_string(i + 1) + " is malformed");
    if (u < 0 || v < 0) throw ConfigError("instance: negative node index");
    g.add_edge(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), w);
  }
  std::string bits;
  if (!(is >> bits)) throw ConfigError("instance: missing planted assignment");
  if (bits.size() != n) throw ConfigError("instance: planted assignment has the wrong length");
  BitString planted = BitString::from_string(bits);
  double stated = 0.0;
  if (!(is >> stated)) throw ConfigError("instance: missing optimal value");
  const double value = cut_value(g, planted);
  if (std::abs(value - stated) > 1e-9 * std::max(1.0, std::abs(stated))) {
    throw ConfigError("instance: stated optimal value does not match the planted cut");
  }
  return PlantedInstance{std::move(g), std::move(planted), value};
}

void save_instance(const std::string& path, const PlantedInstance& inst) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  write_instance(os, inst);
  if (!os) throw ConfigError("failed writing '" + path + "'");
}

PlantedInstance load_instance(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open instance file '" + path + "'");
  return read_instance(is);
}

}  // namespace eda
