#include "radsim/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "radsim/errors.hpp"
#include "radsim/random.hpp"

namespace radsim {

void PropagationParams::validate() const {
  if (n_computers < 1) throw ParameterError("n_computers must be >= 1");
  if (comms_per_interval < 1) throw ParameterError("comms_per_interval must be >= 1");
  if (initial_infected < 1 || initial_infected > n_computers) {
    throw ParameterError("initial_infected must lie in [1, n_computers]");
  }
}

double PropagationCurve::value_at(std::int64_t n) const {
  for (const auto& p : points) {
    if (p.time_step == n) return p.expected_infected;
  }
  throw ParameterError("time step " + std::to_string(n) + " is not on the curve");
}

CommGraph::CommGraph(std::size_t n_nodes, std::vector<Edge> edges,
                     std::vector<std::size_t> infected)
    : n_nodes_(n_nodes), edges_(std::move(edges)), infected_(std::move(infected)) {
  for (const auto& [src, dst] : edges_) {
    if (src >= n_nodes_ || dst >= n_nodes_) throw ParameterError("edge endpoint out of range");
    if (src == dst) throw ParameterError("communication relation has a self-loop");
  }
  for (auto node : infected_) {
    if (node >= n_nodes_) throw ParameterError("infected node out of range");
  }
}

CommGraph CommGraph::complete(std::size_t n_nodes) {
  if (n_nodes == 0) throw ParameterError("graph needs at least one node");
  std::vector<Edge> edges;
  edges.reserve(n_nodes * (n_nodes - 1));
  for (std::size_t i = 0; i < n_nodes; ++i) {
    for (std::size_t j = 0; j < n_nodes; ++j) {
      if (i != j) edges.emplace_back(i, j);
    }
  }
  return CommGraph(n_nodes, std::move(edges), {0});
}

double expected_infected_closed_form(const PropagationParams& params, std::int64_t n) {
  params.validate();
  if (n < 0) throw ParameterError("time step must be nonnegative");
  const auto big_n = static_cast<double>(params.n_computers);
  const auto x0 = static_cast<double>(params.initial_infected);
  const double rate = static_cast<double>(params.comms_per_interval) / big_n;
  // N / (1 + (N/X0 - 1) e^{-nM/N}) multiplied through by X0; exact at n = 0.
  const double decay = std::exp(-static_cast<double>(n) * rate);
  return big_n * x0 / (x0 + (big_n - x0) * decay);
}

double step_recurrence(const PropagationParams& params, double current) {
  params.validate();
  const auto big_n = static_cast<double>(params.n_computers);
  if (!(current >= 0.0 && current <= big_n)) {
    throw ParameterError("current infected count must lie in [0, N]");
  }
  const double rate = static_cast<double>(params.comms_per_interval) / big_n;
  return current + rate * current * (1.0 - current / big_n);
}

PropagationCurve simulate_curve(const PropagationParams& params, std::int64_t n_max,
                                CurveMethod method) {
  params.validate();
  if (n_max < 0) throw ParameterError("n_max must be nonnegative");
  PropagationCurve curve;
  curve.points.reserve(static_cast<std::size_t>(n_max) + 1);
  double value = static_cast<double>(params.initial_infected);
  for (std::int64_t n = 0; n <= n_max; ++n) {
    if (method == CurveMethod::closed_form) {
      value = expected_infected_closed_form(params, n);
    } else if (n > 0) {
      value = step_recurrence(params, value);
    }
    curve.points.push_back({n, value});
  }
  return curve;
}

double inflection_time(const PropagationParams& params) {
  params.validate();
  if (params.initial_infected >= params.n_computers) {
    throw ParameterError("no inflection: initial_infected >= n_computers");
  }
  const auto big_n = static_cast<double>(params.n_computers);
  const auto x0 = static_cast<double>(params.initial_infected);
  return big_n / static_cast<double>(params.comms_per_interval) * std::log(big_n / x0 - 1.0);
}

PropagationCurve monte_carlo_propagation(const MonteCarloSpec& spec, std::uint64_t seed,
                                         std::int64_t n_max, std::int64_t trials) {
  PropagationParams{spec.n_computers, spec.comms_per_interval, 1}.validate();
  return monte_carlo_propagation(CommGraph::complete(static_cast<std::size_t>(spec.n_computers)),
                                 spec.comms_per_interval, seed, n_max, trials);
}

PropagationCurve monte_carlo_propagation(const CommGraph& graph, std::int64_t comms_per_interval,
                                         std::uint64_t seed, std::int64_t n_max,
                                         std::int64_t trials) {
  if (comms_per_interval < 1) throw ParameterError("comms_per_interval must be >= 1");
  if (n_max < 0) throw ParameterError("n_max must be nonnegative");
  if (trials < 1) throw ParameterError("trials must be >= 1");

  const auto steps = static_cast<std::size_t>(n_max) + 1;
  std::vector<double> totals(steps, 0.0);
  const auto& edges = graph.edges();
  Rng rng(seed);
  std::vector<char> infected(graph.node_count());

  for (std::int64_t t = 0; t < trials; ++t) {
    std::fill(infected.begin(), infected.end(), 0);
    std::size_t count = 0;
    for (auto node : graph.infected()) {
      if (!infected[node]) {
        infected[node] = 1;
        ++count;
      }
    }
    totals[0] += static_cast<double>(count);
    for (std::size_t n = 1; n < steps; ++n) {
      if (!edges.empty()) {
        for (std::int64_t c = 0; c < comms_per_interval; ++c) {
          const auto& [src, dst] = edges[uniform_index(rng, edges.size())];
          if (infected[src] && !infected[dst]) {
            infected[dst] = 1;
            ++count;
          }
        }
      }
      totals[n] += static_cast<double>(count);
    }
  }

  PropagationCurve curve;
  curve.points.reserve(steps);
  for (std::size_t n = 0; n < steps; ++n) {
    curve.points.push_back({static_cast<std::int64_t>(n), totals[n] / static_cast<double>(trials)});
  }
  return curve;
}

}  // namespace radsim
