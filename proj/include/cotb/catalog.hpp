#pragma once

// Built-in verification charts and scaling fields, plus the deterministic
// sampler that drives every randomized check.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cotb/cotangent.hpp"
#include "cotb/fields.hpp"

namespace cotb {

enum class ManifoldKind { flat, sphere, hyperbolic, polynomial };
enum class ScalingKind { one, exp_linear, poly };

struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::flat;
  int dim = 2;
  std::string name;
  std::vector<double> box_lo;  // chart sampling box, per coordinate
  std::vector<double> box_hi;
  bool flat_base = false;
  bool space_form = false;  // constant sectional curvature below
  double curvature_k = 0.0;
};

// dim applies to the flat and polynomial charts (2..4); the sphere and the
// hyperbolic half-plane are two-dimensional.
ManifoldSpec catalog_manifold(ManifoldKind kind, int dim = 2);

std::unique_ptr<MetricField> make_metric(const ManifoldSpec& spec);
std::unique_ptr<ScalingField> make_scaling(ScalingKind kind, int dim);

const std::vector<std::string>& manifold_names();
const std::vector<std::string>& scaling_names();
ManifoldKind parse_manifold(const std::string& name);  // usage_error on miss
ScalingKind parse_scaling(const std::string& name);
std::string to_string(ManifoldKind kind);
std::string to_string(ScalingKind kind);

// count random points (x uniform in the chart box, p uniform in the radius-
// p_radius coordinate ball) followed by two forced points at the box
// center: p = 0 and one axis-aligned p of length p_radius.  Identical seeds
// yield identical lists.
std::vector<CotangentPoint> sample_points(const ManifoldSpec& spec, int count,
                                          uint64_t seed,
                                          double p_radius = 1.5);

}  // namespace cotb
