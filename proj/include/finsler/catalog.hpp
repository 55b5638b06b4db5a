#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "finsler/metric.hpp"

namespace finsler {

/// Flat metric a_ij = delta_ij.
MetricSpec euclidean(int n);

/// Round sphere of constant curvature kappa in the stereographic chart,
/// a_ij = 4 delta_ij / (kappa (1 + |x|^2)^2).
MetricSpec sphere(int n, double kappa = 1.0);

/// Poincaré ball of constant curvature -kappa, a_ij = 4 delta_ij / (kappa (1 - |x|^2)^2).
MetricSpec hyperbolic(int n, double kappa = 1.0);

/// Funk metric of the unit ball in Randers form (flag curvature -1/4).
MetricSpec funk(int n);

/// Closed form of the Funk metric (the implicit-equation solution).
double funk_norm(std::span<const double> x, std::span<const double> y);

/// Randers metric with constant a_ij (row-major, n*n) and b_i.
MetricSpec randers_constant(const std::vector<double>& a, const std::vector<double>& b);

/// a = delta, b = (0.3 + 0.1 x2, 0, ..., 0).
MetricSpec perturbed_randers(int n);

/// Metric given by an expression F(x1..xn, y1..yn).
MetricSpec custom_metric(int n, const std::string& expression,
                         std::optional<double> domain_radius = std::nullopt);

/// Names accepted by `catalog`.
std::vector<std::string> catalog_names();

/// Build a catalog metric. Recognized params:
///   sphere, hyperbolic: kappa
///   randers: a (n x n nested or flat), b (length n)
///   custom: F (expression), domain_radius
MetricSpec catalog(const std::string& name, int n, const nlohmann::json& params = nlohmann::json::object());

}  // namespace finsler
