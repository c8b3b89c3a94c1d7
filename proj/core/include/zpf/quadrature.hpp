#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace zpf::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule with `points` nodes, computed by Newton iteration on P_n.
const GaussLegendreRule& gauss_legendre(std::size_t points);

/// Integrates f over consecutive panels [edges[i], edges[i+1]] with a fixed rule.
template <typename F>
double composite(F&& f, std::span<const double> edges, std::size_t points = 10) {
  const auto& rule = gauss_legendre(points);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double mid = 0.5 * (edges[i] + edges[i + 1]);
    const double half = 0.5 * (edges[i + 1] - edges[i]);
    double panel = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) panel += rule.weights[j] * f(mid + half * rule.nodes[j]);
    total += half * panel;
  }
  return total;
}

/// Uniform panel edges on [a, b].
std::vector<double> uniform_edges(double a, double b, std::size_t panels);

}  // namespace zpf::quad
