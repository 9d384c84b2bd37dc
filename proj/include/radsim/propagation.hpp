#pragma once

// Expected-infection model for a virus spreading through N communicating
// computers with M data communications per unit time.
//
//   E(X_{n+1}) - E(X_n) = (M/N) E(X_n) (1 - E(X_n)/N)          (recurrence)
//   E(X_n) = N / (1 + (N/X0 - 1) exp(-n M/N))                    (logistic solution)
//
// plus an agent-based Monte Carlo over an explicit communication relation.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace radsim {

struct PropagationParams {
  std::int64_t n_computers{1};
  std::int64_t comms_per_interval{1};
  std::int64_t initial_infected{1};

  // Throws ParameterError unless N >= 1, M >= 1 and 1 <= X0 <= N.
  void validate() const;
};

struct CurvePoint {
  std::int64_t time_step{0};
  double expected_infected{0};
};

struct PropagationCurve {
  std::vector<CurvePoint> points;

  std::size_t size() const { return points.size(); }
  double value_at(std::int64_t n) const;  // throws ParameterError if n is not on the curve
};

enum class CurveMethod { closed_form, recurrence };

// Directed communication relation: an edge (i, j) means data flows from i to j.
class CommGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  CommGraph(std::size_t n_nodes, std::vector<Edge> edges, std::vector<std::size_t> infected);

  // Every ordered pair (i, j), i != j, with node 0 infected.
  static CommGraph complete(std::size_t n_nodes);

  std::size_t node_count() const { return n_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::size_t>& infected() const { return infected_; }

 private:
  std::size_t n_nodes_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> infected_;
};

struct MonteCarloSpec {
  std::int64_t n_computers{1};
  std::int64_t comms_per_interval{1};
};

double expected_infected_closed_form(const PropagationParams& params, std::int64_t n);

// One application of the recurrence. `current` must lie in [0, N].
double step_recurrence(const PropagationParams& params, double current);

PropagationCurve simulate_curve(const PropagationParams& params, std::int64_t n_max,
                                CurveMethod method);

// Time at which the logistic curve crosses N/2. Requires X0 < N.
double inflection_time(const PropagationParams& params);

// Mean infected count per step over `trials` runs on the complete graph with a
// single initially infected computer. Each of the M communications in a step
// draws one ordered pair uniformly (with replacement); the target is infected
// iff the source is infected at that moment and the target is not.
PropagationCurve monte_carlo_propagation(const MonteCarloSpec& spec, std::uint64_t seed,
                                         std::int64_t n_max, std::int64_t trials);

// Same process over an arbitrary communication relation; pairs are drawn
// uniformly from the graph's edge list.
PropagationCurve monte_carlo_propagation(const CommGraph& graph, std::int64_t comms_per_interval,
                                         std::uint64_t seed, std::int64_t n_max,
                                         std::int64_t trials);

}  // namespace radsim
