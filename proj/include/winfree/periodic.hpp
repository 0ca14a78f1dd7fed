#pragma once

#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <vector>

#include "winfree/parallel.hpp"

namespace winfree {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Value with first and second derivative, propagated through arithmetic.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  double order(int k) const { return k == 0 ? value : (k == 1 ? d1 : d2); }
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator*(double c, const Jet& a);

/// c0 + sum_k ck cos(ks) + sum_k sk sin(ks).
/// cos_coeffs = [c0, c1, ...], sin_coeffs = [s1, s2, ...].
struct TrigPoly {
  std::vector<double> cos_coeffs{0.0};
  std::vector<double> sin_coeffs;

  std::size_t degree() const;
  Jet jet(double s) const;
  /// Evaluates from precomputed cos(s), sin(s); harmonics by recurrence.
  Jet jet_from(double c, double s) const;
  TrigPoly derivative() const;

  bool operator==(const TrigPoly&) const = default;
};

/// Reduces s into [0, 2π).
double wrap_phase(double s);

/// Immutable 2π-periodic scalar function with derivatives up to order 2.
/// Closed forms are expression trees over trigonometric polynomials; solved
/// functions are quintic Hermite tables on a uniform grid. Cheap to copy,
/// safe to share across threads.
class PeriodicFunction {
 public:
  struct Node;

  PeriodicFunction();  // zero
  PeriodicFunction(TrigPoly poly);  // NOLINT: implicit by design of the grammar
  static PeriodicFunction constant(double c);
  static PeriodicFunction sine();
  static PeriodicFunction cosine();
  /// Table on s_k = 2πk/N with value, first and second derivative per node.
  static PeriodicFunction sampled(std::vector<double> values, std::vector<double> d1,
                                  std::vector<double> d2);

  Jet jet(double s) const;
  double operator()(double s, int order = 0) const { return jet(s).order(order); }

  /// s ↦ f(s + c).
  PeriodicFunction shifted(double c) const;
  /// Exact derivative; only available for trigonometric polynomials.
  PeriodicFunction derivative() const;

  const TrigPoly* trig() const;
  bool is_sampled() const;
  std::size_t sample_count() const;

  friend PeriodicFunction operator+(const PeriodicFunction& a, const PeriodicFunction& b);
  friend PeriodicFunction operator-(const PeriodicFunction& a, const PeriodicFunction& b);
  friend PeriodicFunction operator*(const PeriodicFunction& a, const PeriodicFunction& b);
  friend PeriodicFunction operator/(const PeriodicFunction& a, const PeriodicFunction& b);
  friend PeriodicFunction operator*(double c, const PeriodicFunction& a);
  friend PeriodicFunction operator+(double c, const PeriodicFunction& a);
  friend PeriodicFunction operator-(double c, const PeriodicFunction& a);
  friend PeriodicFunction operator-(const PeriodicFunction& a);
  friend PeriodicFunction operator+(const PeriodicFunction& a, double c) { return c + a; }
  friend PeriodicFunction operator-(const PeriodicFunction& a, double c) { return (-c) + a; }
  friend PeriodicFunction operator*(const PeriodicFunction& a, double c) { return c * a; }
  friend PeriodicFunction operator/(const PeriodicFunction& a, double c) { return (1.0 / c) * a; }
  friend PeriodicFunction operator/(double c, const PeriodicFunction& a) { return constant(c) / a; }

 private:
  explicit PeriodicFunction(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

double evaluate(const PeriodicFunction& f, double s, int order = 0);

struct GridSettings {
  std::size_t sup_grid = std::size_t{1} << 14;
  std::size_t sample_count = std::size_t{1} << 12;
  double quad_tol = 1e-10;
  std::size_t quad_max_panels = std::size_t{1} << 20;

  GridSettings doubled() const {
    return {sup_grid * 2, sample_count * 2, quad_tol, quad_max_panels};
  }
};

struct Extremum {
  double arg = 0.0;
  double value = 0.0;
};

/// Global maximum of f^(order) over [0, 2π): dense grid plus golden-section
/// refinement around the best grid local maxima.
Extremum maximize(const PeriodicFunction& f, int order = 0, const GridSettings& grid = {},
                  Exec exec = Exec::Parallel);
Extremum minimize(const PeriodicFunction& f, int order = 0, const GridSettings& grid = {},
                  Exec exec = Exec::Parallel);

/// max over [0, 2π] of |f^(order)|, order in {0, 1, 2}.
double sup_norm(const PeriodicFunction& f, int order = 0, const GridSettings& grid = {},
                Exec exec = Exec::Parallel);

/// Composite Simpson over one period with panel doubling. Throws
/// NonConvergence when successive estimates still differ by more than the
/// tolerance at the panel cap.
double integrate_over_period(const PeriodicFunction& f, const GridSettings& grid = {});

struct PeriodicSolution {
  PeriodicFunction function;
  double integral_a = 0.0;        // ∫₀^{2π} a
  double periodicity_gap = 0.0;   // |u(0) − u(2π)| after propagating one period
};

/// Unique 2π-periodic solution of u′ = b − a·u by variation of constants.
/// Throws DegenerateMonodromy when ∫a ≤ 1e−12.
PeriodicSolution solve_periodic_linear_detailed(const PeriodicFunction& a, const PeriodicFunction& b,
                                                const GridSettings& grid = {});
PeriodicFunction solve_periodic_linear(const PeriodicFunction& a, const PeriodicFunction& b,
                                       const GridSettings& grid = {});

}  // namespace winfree
