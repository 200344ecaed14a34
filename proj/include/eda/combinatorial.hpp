#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <vector>

#include "eda/bitstring.hpp"
#include "eda/frequency_vector.hpp"
#include "eda/objectives.hpp"
#include "eda/rng.hpp"

namespace eda {

struct Edge {
  std::uint32_t u;
  std::uint32_t v;
  double weight;
};

/// Undirected graph with non-negative edge weights; edges stored with u < v.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t nodes) : nodes_(nodes) {}

  /// Throws ConfigError on self-loops, out-of-range nodes, negative weights
  /// or a repeated pair.
  void add_edge(std::uint32_t a, std::uint32_t b, double weight);

  std::size_t node_count() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double total_weight() const;

 private:
  std::size_t nodes_ = 0;
  std::vector<Edge> edges_;
  std::unordered_set<std::uint64_t> seen_;  // u * nodes + v
};

/// Sum of weights of edges whose endpoints lie on different sides.
double cut_value(const WeightedGraph& g, const BitString& x);

struct PlantedInstance {
  WeightedGraph graph;
  BitString planted_assignment;
  double optimal_value;
};

/// Bipartite instance on halves {0..n/2-1} and {n/2..n-1}: each cross pair is
/// an edge with probability `cross_density`, weight uniform in [1, 2]. Every
/// edge crosses the planted cut, so its value (the total weight) is maximal.
/// For n <= 16 the optimum is confirmed by enumeration before returning.
PlantedInstance planted_maxcut(std::size_t n, double cross_density, RngStream& rng);

/// Exhaustive maximum cut over all 2^n assignments (n <= 30).
double brute_force_max_cut(const WeightedGraph& g);

struct BipartitionConstraint {
  std::size_t ones = 0;  // |V_1|
};

/// A string with exactly `ones` ones: indices are visited in a fresh random
/// order; a forced value is assigned once either quota is used up, otherwise
/// bit j ~ Bernoulli(p_j).
BitString constrained_partition_sample(const FrequencyVector& p, BipartitionConstraint constraint, RngStream& rng);
void constrained_partition_sample_into(const FrequencyVector& p, BipartitionConstraint constraint, RngStream& rng,
                                       BitString& out);

/// Max-cut as a maximization objective with a planted optimum value.
class MaxCutObjective : public Objective {
 public:
  MaxCutObjective(WeightedGraph graph, double optimal_value);

  std::string name() const override { return "maxcut"; }
  std::size_t dimension() const override { return graph_.node_count(); }
  double evaluate_true(const BitString& x) const override { return cut_value(graph_, x); }
  double optimum_value() const override { return optimal_value_; }
  const WeightedGraph& graph() const { return graph_; }

 private:
  WeightedGraph graph_;
  double optimal_value_;
};

/// Max-cut restricted to |V_1| = m. Feasibility is enforced by sampling
/// through `constrained_partition_sample`.
class BipartitionObjective final : public MaxCutObjective {
 public:
  BipartitionObjective(WeightedGraph graph, BipartitionConstraint constraint, double optimal_value);

  std::string name() const override { return "bipartition"; }
  BipartitionConstraint constraint() const { return constraint_; }
  void sample(const FrequencyVector& p, RngStream& rng, BitString& out) const override;

 private:
  BipartitionConstraint constraint_;
};

/// Edge-list text format:
///   n m
///   u v w        (m lines, 0-indexed, u < v)
///   <planted assignment as n characters of 0/1>
///   <optimal value>
void write_instance(std::ostream& os, const PlantedInstance& inst);
PlantedInstance read_instance(std::istream& is);
void save_instance(const std::string& path, const PlantedInstance& inst);
PlantedInstance load_instance(const std::string& path);

}  // namespace eda
