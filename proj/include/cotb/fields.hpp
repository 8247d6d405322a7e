#pragma once

// Chart-function interfaces.  Geometry code needs to evaluate metric and
// scaling components not just at double precision but under nested dual
// seeding (up to depth 3), so the interfaces expose one overload per level
// of the closed scalar set {double, D1, D2, D3}.  Concrete fields are
// written once as scalar-generic functors and wrapped.

#include <memory>
#include <string>
#include <utility>

#include "cotb/dual.hpp"
#include "cotb/errors.hpp"

namespace cotb {

// Real-valued function of chart coordinates.  Also serves as the scaling
// field f of the bundle metric, which callers require to stay positive.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  int dim() const { return dim_; }
  virtual double eval(const double* x) const = 0;
  virtual D1 eval(const D1* x) const = 0;
  virtual D2 eval(const D2* x) const = 0;
  virtual D3 eval(const D3* x) const = 0;

 protected:
  explicit ScalarField(int dim) : dim_(dim) {}

 private:
  int dim_;
};

using ScalingField = ScalarField;  // contract: values stay > 0 on the chart

// Symmetric metric components g_ij(x), written row-major into an n*n block.
class MetricField {
 public:
  virtual ~MetricField() = default;
  int dim() const { return dim_; }
  virtual void eval(const double* x, double* g) const = 0;
  virtual void eval(const D1* x, D1* g) const = 0;
  virtual void eval(const D2* x, D2* g) const = 0;
  virtual void eval(const D3* x, D3* g) const = 0;

 protected:
  explicit MetricField(int dim) : dim_(dim) {}

 private:
  int dim_;
};

template <class F>
class ScalarFieldOf final : public ScalarField {
 public:
  ScalarFieldOf(int dim, F f) : ScalarField(dim), f_(std::move(f)) {}
  double eval(const double* x) const override { return f_(x); }
  D1 eval(const D1* x) const override { return f_(x); }
  D2 eval(const D2* x) const override { return f_(x); }
  D3 eval(const D3* x) const override { return f_(x); }

 private:
  F f_;
};

template <class F>
class MetricFieldOf final : public MetricField {
 public:
  MetricFieldOf(int dim, F f) : MetricField(dim), f_(std::move(f)) {}
  void eval(const double* x, double* g) const override { f_(x, g); }
  void eval(const D1* x, D1* g) const override { f_(x, g); }
  void eval(const D2* x, D2* g) const override { f_(x, g); }
  void eval(const D3* x, D3* g) const override { f_(x, g); }

 private:
  F f_;
};

template <class F>
std::unique_ptr<ScalarField> make_scalar_field(int dim, F f) {
  return std::make_unique<ScalarFieldOf<F>>(dim, std::move(f));
}

template <class F>
std::unique_ptr<MetricField> make_metric_field(int dim, F f) {
  return std::make_unique<MetricFieldOf<F>>(dim, std::move(f));
}

}  // namespace cotb
