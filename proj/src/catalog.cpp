#include "cotb/catalog.hpp"

#include <cmath>
#include <random>

#include "cotb/errors.hpp"

namespace cotb {

namespace {

struct FlatMetric {
  int n;
  template <class T>
  void operator()(const T* /*x*/, T* g) const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g[i * n + j] = T(i == j ? 1.0 : 0.0);
  }
};

// Round unit sphere in polar coordinates (theta, phi), away from the poles.
struct SphereMetric {
  template <class T>
  void operator()(const T* x, T* g) const {
    using std::sin;
    T s = sin(x[0]);
    g[0] = T(1.0);
    g[1] = T(0.0);
    g[2] = T(0.0);
    g[3] = s * s;
  }
};

// Upper half-plane, coordinates (x, y) with y > 0.
struct HyperbolicMetric {
  template <class T>
  void operator()(const T* x, T* g) const {
    T w = 1.0 / (x[1] * x[1]);
    g[0] = w;
    g[1] = T(0.0);
    g[2] = T(0.0);
    g[3] = w;
  }
};

// Identity plus a small generic quadratic perturbation; positive definite on
// [-1,1]^n and curved enough to exercise every curvature term.
struct PolynomialMetric {
  int n;
  template <class T>
  void operator()(const T* x, T* g) const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        T q = 0.1 * (x[i] * x[j]) + 0.02 * (x[i] + x[j]);
        if (i == j) {
          int k = (i + 1) % n;
          q += 1.0 + 0.04 * (x[k] * x[k]);
        }
        g[i * n + j] = q;
      }
  }
};

struct OneScaling {
  template <class T>
  T operator()(const T* /*x*/) const {
    return T(1.0);
  }
};

struct ExpScaling {
  double c = 0.3;
  template <class T>
  T operator()(const T* x) const {
    using std::exp;
    return exp(c * x[0]);
  }
};

struct PolyScaling {
  template <class T>
  T operator()(const T* x) const {
    return 1.0 + x[0] * x[0];
  }
};

double next_uniform(std::mt19937_64& rng) {
  // fixed 53-bit mapping, identical across standard library implementations
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ManifoldSpec catalog_manifold(ManifoldKind kind, int dim) {
  ManifoldSpec spec;
  spec.kind = kind;
  switch (kind) {
    case ManifoldKind::flat:
      if (dim < 2 || dim > 4) throw usage_error("flat chart dimension must be 2..4");
      spec.dim = dim;
      spec.name = "flat";
      spec.box_lo.assign(dim, -1.0);
      spec.box_hi.assign(dim, 1.0);
      spec.flat_base = true;
      spec.space_form = true;
      spec.curvature_k = 0.0;
      break;
    case ManifoldKind::sphere:
      spec.dim = 2;
      spec.name = "sphere";
      spec.box_lo = {0.2, 0.0};
      spec.box_hi = {M_PI - 0.2, 6.2};
      spec.space_form = true;
      spec.curvature_k = 1.0;
      break;
    case ManifoldKind::hyperbolic:
      spec.dim = 2;
      spec.name = "hyperbolic";
      spec.box_lo = {-1.0, 0.5};
      spec.box_hi = {1.0, 2.5};
      spec.space_form = true;
      spec.curvature_k = -1.0;
      break;
    case ManifoldKind::polynomial:
      if (dim < 2 || dim > 4)
        throw usage_error("polynomial chart dimension must be 2..4");
      spec.dim = dim;
      spec.name = "polynomial";
      spec.box_lo.assign(dim, -1.0);
      spec.box_hi.assign(dim, 1.0);
      break;
  }
  return spec;
}

std::unique_ptr<MetricField> make_metric(const ManifoldSpec& spec) {
  switch (spec.kind) {
    case ManifoldKind::flat:
      return make_metric_field(spec.dim, FlatMetric{spec.dim});
    case ManifoldKind::sphere:
      return make_metric_field(2, SphereMetric{});
    case ManifoldKind::hyperbolic:
      return make_metric_field(2, HyperbolicMetric{});
    case ManifoldKind::polynomial:
      return make_metric_field(spec.dim, PolynomialMetric{spec.dim});
  }
  throw usage_error("unknown manifold kind");
}

std::unique_ptr<ScalingField> make_scaling(ScalingKind kind, int dim) {
  switch (kind) {
    case ScalingKind::one:
      return make_scalar_field(dim, OneScaling{});
    case ScalingKind::exp_linear:
      return make_scalar_field(dim, ExpScaling{});
    case ScalingKind::poly:
      return make_scalar_field(dim, PolyScaling{});
  }
  throw usage_error("unknown scaling kind");
}

const std::vector<std::string>& manifold_names() {
  static const std::vector<std::string> names = {"flat", "sphere", "hyperbolic",
                                                 "polynomial"};
  return names;
}

const std::vector<std::string>& scaling_names() {
  static const std::vector<std::string> names = {"one", "exp", "poly"};
  return names;
}

ManifoldKind parse_manifold(const std::string& name) {
  if (name == "flat") return ManifoldKind::flat;
  if (name == "sphere") return ManifoldKind::sphere;
  if (name == "hyperbolic") return ManifoldKind::hyperbolic;
  if (name == "polynomial") return ManifoldKind::polynomial;
  throw usage_error("unknown manifold: " + name);
}

ScalingKind parse_scaling(const std::string& name) {
  if (name == "one") return ScalingKind::one;
  if (name == "exp") return ScalingKind::exp_linear;
  if (name == "poly") return ScalingKind::poly;
  throw usage_error("unknown scaling: " + name);
}

std::string to_string(ManifoldKind kind) {
  return manifold_names()[static_cast<size_t>(kind)];
}

std::string to_string(ScalingKind kind) {
  return scaling_names()[static_cast<size_t>(kind)];
}

std::vector<CotangentPoint> sample_points(const ManifoldSpec& spec, int count,
                                          uint64_t seed, double p_radius) {
  if (count < 0) throw usage_error("sample count must be nonnegative");
  if (!(p_radius > 0.0)) throw usage_error("p radius must be positive");
  const int n = spec.dim;
  std::mt19937_64 rng(seed);
  std::vector<CotangentPoint> pts;
  pts.reserve(static_cast<size_t>(count) + 2);
  for (int c = 0; c < count; ++c) {
    CotangentPoint pt;
    pt.x.resize(static_cast<size_t>(n));
    pt.p.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      pt.x[static_cast<size_t>(i)] =
          spec.box_lo[static_cast<size_t>(i)] +
          (spec.box_hi[static_cast<size_t>(i)] - spec.box_lo[static_cast<size_t>(i)]) *
              next_uniform(rng);
    // rejection sampling keeps p uniform in the coordinate ball
    for (;;) {
      double norm2 = 0.0;
      for (int i = 0; i < n; ++i) {
        double v = (2.0 * next_uniform(rng) - 1.0) * p_radius;
        pt.p[static_cast<size_t>(i)] = v;
        norm2 += v * v;
      }
      if (norm2 <= p_radius * p_radius) break;
    }
    pts.push_back(std::move(pt));
  }
  CotangentPoint zero;
  zero.x.resize(static_cast<size_t>(n));
  zero.p.assign(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    zero.x[static_cast<size_t>(i)] = 0.5 * (spec.box_lo[static_cast<size_t>(i)] +
                                            spec.box_hi[static_cast<size_t>(i)]);
  CotangentPoint axis = zero;
  axis.p[0] = p_radius;
  pts.push_back(std::move(zero));
  pts.push_back(std::move(axis));
  return pts;
}

}  // namespace cotb
