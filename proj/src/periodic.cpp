#include "winfree/periodic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "winfree/error.hpp"

namespace winfree {

// ---------------------------------------------------------------- Jet

Jet operator+(const Jet& a, const Jet& b) { return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2}; }
Jet operator-(const Jet& a, const Jet& b) { return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2}; }
Jet operator*(const Jet& a, const Jet& b) {
  return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
          a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
}
Jet operator/(const Jet& a, const Jet& b) {
  // q = a/b, q' = (a' − q b')/b, q'' = (a'' − 2 q' b' − q b'')/b
  const double q = a.value / b.value;
  const double q1 = (a.d1 - q * b.d1) / b.value;
  const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.value;
  return {q, q1, q2};
}
Jet operator*(double c, const Jet& a) { return {c * a.value, c * a.d1, c * a.d2}; }

// ---------------------------------------------------------------- TrigPoly

double wrap_phase(double s) {
  double r = std::fmod(s, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

std::size_t TrigPoly::degree() const {
  const std::size_t dc = cos_coeffs.empty() ? 0 : cos_coeffs.size() - 1;
  return std::max(dc, sin_coeffs.size());
}

Jet TrigPoly::jet(double s) const {
  if (degree() == 0) return {cos_coeffs.empty() ? 0.0 : cos_coeffs[0], 0.0, 0.0};
  const double r = wrap_phase(s);
  return jet_from(std::cos(r), std::sin(r));
}

Jet TrigPoly::jet_from(double c, double s) const {
  Jet out{cos_coeffs.empty() ? 0.0 : cos_coeffs[0], 0.0, 0.0};
  const std::size_t deg = degree();
  double ck = c;
  double sk = s;
  for (std::size_t k = 1; k <= deg; ++k) {
    const double a = k < cos_coeffs.size() ? cos_coeffs[k] : 0.0;
    const double b = k - 1 < sin_coeffs.size() ? sin_coeffs[k - 1] : 0.0;
    const double kk = static_cast<double>(k);
    out.value += a * ck + b * sk;
    out.d1 += kk * (b * ck - a * sk);
    out.d2 -= kk * kk * (a * ck + b * sk);
    const double next_c = ck * c - sk * s;
    sk = sk * c + ck * s;
    ck = next_c;
  }
  return out;
}

TrigPoly TrigPoly::derivative() const {
  const std::size_t deg = degree();
  TrigPoly d;
  d.cos_coeffs.assign(deg + 1, 0.0);
  d.sin_coeffs.assign(deg, 0.0);
  for (std::size_t k = 1; k <= deg; ++k) {
    const double a = k < cos_coeffs.size() ? cos_coeffs[k] : 0.0;
    const double b = k - 1 < sin_coeffs.size() ? sin_coeffs[k - 1] : 0.0;
    const double kk = static_cast<double>(k);
    d.cos_coeffs[k] = kk * b;
    d.sin_coeffs[k - 1] = -kk * a;
  }
  return d;
}

namespace {

double cos_at(const TrigPoly& p, std::size_t k) { return k < p.cos_coeffs.size() ? p.cos_coeffs[k] : 0.0; }
double sin_at(const TrigPoly& p, std::size_t k) {
  return (k >= 1 && k - 1 < p.sin_coeffs.size()) ? p.sin_coeffs[k - 1] : 0.0;
}

TrigPoly trig_sum(const TrigPoly& a, const TrigPoly& b, double sign) {
  const std::size_t deg = std::max(a.degree(), b.degree());
  TrigPoly out;
  out.cos_coeffs.assign(deg + 1, 0.0);
  out.sin_coeffs.assign(deg, 0.0);
  for (std::size_t k = 0; k <= deg; ++k) out.cos_coeffs[k] = cos_at(a, k) + sign * cos_at(b, k);
  for (std::size_t k = 1; k <= deg; ++k) out.sin_coeffs[k - 1] = sin_at(a, k) + sign * sin_at(b, k);
  return out;
}

// Product-to-sum expansion; exact.
TrigPoly trig_product(const TrigPoly& a, const TrigPoly& b) {
  const std::size_t da = a.degree();
  const std::size_t db = b.degree();
  const std::size_t deg = da + db;
  std::vector<double> cc(deg + 1, 0.0);
  std::vector<double> ss(deg + 1, 0.0);  // index = harmonic
  auto acc_cos = [&](long k, double v) { cc[static_cast<std::size_t>(std::labs(k))] += v; };
  auto acc_sin = [&](long k, double v) {
    if (k > 0) ss[static_cast<std::size_t>(k)] += v;
    else if (k < 0) ss[static_cast<std::size_t>(-k)] -= v;
  };
  for (std::size_t i = 0; i <= da; ++i) {
    const double ai = cos_at(a, i);
    const double bi = sin_at(a, i);
    for (std::size_t j = 0; j <= db; ++j) {
      const double aj = cos_at(b, j);
      const double bj = sin_at(b, j);
      const long p = static_cast<long>(i) + static_cast<long>(j);
      const long m = static_cast<long>(i) - static_cast<long>(j);
      // cos i cos j
      acc_cos(p, 0.5 * ai * aj);
      acc_cos(m, 0.5 * ai * aj);
      // sin i sin j
      acc_cos(m, 0.5 * bi * bj);
      acc_cos(p, -0.5 * bi * bj);
      // sin i cos j
      acc_sin(p, 0.5 * bi * aj);
      acc_sin(m, 0.5 * bi * aj);
      // cos i sin j
      acc_sin(p, 0.5 * ai * bj);
      acc_sin(-m, 0.5 * ai * bj);
    }
  }
  TrigPoly out;
  out.cos_coeffs = std::move(cc);
  out.sin_coeffs.assign(ss.begin() + 1, ss.end());
  return out;
}

}  // namespace

// ---------------------------------------------------------------- nodes

struct PeriodicFunction::Node {
  virtual ~Node() = default;
  virtual Jet eval(double s) const = 0;
};

namespace {

using NodePtr = std::shared_ptr<const PeriodicFunction::Node>;

struct TrigNode final : PeriodicFunction::Node {
  explicit TrigNode(TrigPoly p) : poly(std::move(p)) {}
  Jet eval(double s) const override { return poly.jet(s); }
  TrigPoly poly;
};

enum class BinaryOp { Add, Sub, Mul, Div };

struct BinaryNode final : PeriodicFunction::Node {
  BinaryNode(BinaryOp o, NodePtr l, NodePtr r) : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
  Jet eval(double s) const override {
    const Jet a = lhs->eval(s);
    const Jet b = rhs->eval(s);
    switch (op) {
      case BinaryOp::Add: return a + b;
      case BinaryOp::Sub: return a - b;
      case BinaryOp::Mul: return a * b;
      case BinaryOp::Div: return a / b;
    }
    return {};
  }
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};

struct AffineNode final : PeriodicFunction::Node {
  AffineNode(double sc, double off, NodePtr f) : scale(sc), offset(off), inner(std::move(f)) {}
  Jet eval(double s) const override {
    Jet j = scale * inner->eval(s);
    j.value += offset;
    return j;
  }
  double scale;
  double offset;
  NodePtr inner;
};

struct ShiftNode final : PeriodicFunction::Node {
  ShiftNode(double c, NodePtr f) : shift(c), inner(std::move(f)) {}
  Jet eval(double s) const override { return inner->eval(wrap_phase(wrap_phase(s) + shift)); }
  double shift;
  NodePtr inner;
};

// Quintic Hermite table: C² across nodes, exact value/d1/d2 at nodes.
struct SampledNode final : PeriodicFunction::Node {
  SampledNode(const std::vector<double>& u, const std::vector<double>& v, const std::vector<double>& w)
      : count(u.size()), h(kTwoPi / static_cast<double>(u.size())), coeffs(6 * u.size()) {
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t k1 = (k + 1) % count;
      const double a0 = u[k];
      const double a1 = h * v[k];
      const double a2 = 0.5 * h * h * w[k];
      const double big_u = u[k1] - (a0 + a1 + a2);
      const double big_v = h * v[k1] - (a1 + 2.0 * a2);
      const double big_w = h * h * w[k1] - 2.0 * a2;
      double* c = &coeffs[6 * k];
      c[0] = a0;
      c[1] = a1;
      c[2] = a2;
      c[3] = 10.0 * big_u - 4.0 * big_v + 0.5 * big_w;
      c[4] = -15.0 * big_u + 7.0 * big_v - big_w;
      c[5] = 6.0 * big_u - 3.0 * big_v + 0.5 * big_w;
    }
  }

  Jet eval(double s) const override {
    const double t = wrap_phase(s) / h;
    auto k = static_cast<std::size_t>(t);
    if (k >= count) k = count - 1;
    const double tau = t - static_cast<double>(k);
    const double* c = &coeffs[6 * k];
    const double p = c[0] + tau * (c[1] + tau * (c[2] + tau * (c[3] + tau * (c[4] + tau * c[5]))));
    const double dp = c[1] + tau * (2.0 * c[2] + tau * (3.0 * c[3] + tau * (4.0 * c[4] + tau * 5.0 * c[5])));
    const double ddp = 2.0 * c[2] + tau * (6.0 * c[3] + tau * (12.0 * c[4] + tau * 20.0 * c[5]));
    return {p, dp / h, ddp / (h * h)};
  }

  std::size_t count;
  double h;
  std::vector<double> coeffs;
};

const TrigPoly* as_trig(const NodePtr& node) {
  const auto* t = dynamic_cast<const TrigNode*>(node.get());
  return t ? &t->poly : nullptr;
}

}  // namespace

// ---------------------------------------------------------------- PeriodicFunction

PeriodicFunction::PeriodicFunction() : PeriodicFunction(TrigPoly{}) {}
PeriodicFunction::PeriodicFunction(TrigPoly poly) : node_(std::make_shared<TrigNode>(std::move(poly))) {}
PeriodicFunction::PeriodicFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

PeriodicFunction PeriodicFunction::constant(double c) { return TrigPoly{{c}, {}}; }
PeriodicFunction PeriodicFunction::sine() { return TrigPoly{{0.0}, {1.0}}; }
PeriodicFunction PeriodicFunction::cosine() { return TrigPoly{{0.0, 1.0}, {}}; }

PeriodicFunction PeriodicFunction::sampled(std::vector<double> values, std::vector<double> d1,
                                           std::vector<double> d2) {
  if (values.empty() || values.size() != d1.size() || values.size() != d2.size()) {
    throw std::invalid_argument("sampled periodic function needs equal-length non-empty tables");
  }
  return PeriodicFunction(std::make_shared<SampledNode>(values, d1, d2));
}

Jet PeriodicFunction::jet(double s) const { return node_->eval(s); }

PeriodicFunction PeriodicFunction::shifted(double c) const {
  return PeriodicFunction(std::make_shared<ShiftNode>(c, node_));
}

PeriodicFunction PeriodicFunction::derivative() const {
  if (const TrigPoly* p = trig()) return p->derivative();
  throw std::logic_error("derivative() is only defined for trigonometric polynomials");
}

const TrigPoly* PeriodicFunction::trig() const { return as_trig(node_); }
bool PeriodicFunction::is_sampled() const { return dynamic_cast<const SampledNode*>(node_.get()) != nullptr; }
std::size_t PeriodicFunction::sample_count() const {
  const auto* s = dynamic_cast<const SampledNode*>(node_.get());
  return s ? s->count : 0;
}

PeriodicFunction operator+(const PeriodicFunction& a, const PeriodicFunction& b) {
  if (a.trig() && b.trig()) return trig_sum(*a.trig(), *b.trig(), 1.0);
  return PeriodicFunction(std::make_shared<BinaryNode>(BinaryOp::Add, a.node_, b.node_));
}
PeriodicFunction operator-(const PeriodicFunction& a, const PeriodicFunction& b) {
  if (a.trig() && b.trig()) return trig_sum(*a.trig(), *b.trig(), -1.0);
  return PeriodicFunction(std::make_shared<BinaryNode>(BinaryOp::Sub, a.node_, b.node_));
}
PeriodicFunction operator*(const PeriodicFunction& a, const PeriodicFunction& b) {
  if (a.trig() && b.trig()) return trig_product(*a.trig(), *b.trig());
  return PeriodicFunction(std::make_shared<BinaryNode>(BinaryOp::Mul, a.node_, b.node_));
}
PeriodicFunction operator/(const PeriodicFunction& a, const PeriodicFunction& b) {
  return PeriodicFunction(std::make_shared<BinaryNode>(BinaryOp::Div, a.node_, b.node_));
}
PeriodicFunction operator*(double c, const PeriodicFunction& a) {
  if (a.trig()) return trig_product(TrigPoly{{c}, {}}, *a.trig());
  return PeriodicFunction(std::make_shared<AffineNode>(c, 0.0, a.node_));
}
PeriodicFunction operator+(double c, const PeriodicFunction& a) {
  if (a.trig()) return trig_sum(TrigPoly{{c}, {}}, *a.trig(), 1.0);
  return PeriodicFunction(std::make_shared<AffineNode>(1.0, c, a.node_));
}
PeriodicFunction operator-(double c, const PeriodicFunction& a) {
  if (a.trig()) return trig_sum(TrigPoly{{c}, {}}, *a.trig(), -1.0);
  return PeriodicFunction(std::make_shared<AffineNode>(-1.0, c, a.node_));
}
PeriodicFunction operator-(const PeriodicFunction& a) { return -1.0 * a; }

double evaluate(const PeriodicFunction& f, double s, int order) { return f(s, order); }

// ---------------------------------------------------------------- extrema

namespace {

template <class G>
double golden_max(G&& g, double lo, double hi, double& best_arg) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = g(x1);
  double f2 = g(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = g(x1);
    }
  }
  if (f1 >= f2) {
    best_arg = x1;
    return f1;
  }
  best_arg = x2;
  return f2;
}

// Maximum of g over one period.
template <class G>
Extremum periodic_max(G&& g, std::size_t grid, Exec exec) {
  const std::vector<double> v = sample_grid(g, 0.0, kTwoPi, grid, exec);
  const double h = kTwoPi / static_cast<double>(grid);
  const std::size_t n = v.size();
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = v[(i + n - 1) % n];
    const double next = v[(i + 1) % n];
    if (v[i] >= prev && v[i] >= next) peaks.push_back(i);
  }
  if (peaks.empty()) peaks.push_back(grid_max(v, exec).index);
  constexpr std::size_t kRefine = 4;
  if (peaks.size() > kRefine) {
    std::partial_sort(peaks.begin(), peaks.begin() + kRefine, peaks.end(),
                      [&](std::size_t a, std::size_t b) { return v[a] > v[b] || (v[a] == v[b] && a < b); });
    peaks.resize(kRefine);
  }
  Extremum best{0.0, -std::numeric_limits<double>::infinity()};
  for (std::size_t i : peaks) {
    const double center = static_cast<double>(i) * h;
    if (v[i] > best.value) best = {center, v[i]};
    double arg = center;
    const double val = golden_max(g, center - h, center + h, arg);
    if (val > best.value) best = {wrap_phase(arg), val};
  }
  return best;
}

void check_order(int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("derivative order must be 0, 1 or 2");
}

}  // namespace

Extremum maximize(const PeriodicFunction& f, int order, const GridSettings& grid, Exec exec) {
  check_order(order);
  return periodic_max([&](double s) { return f(s, order); }, grid.sup_grid, exec);
}

Extremum minimize(const PeriodicFunction& f, int order, const GridSettings& grid, Exec exec) {
  check_order(order);
  Extremum e = periodic_max([&](double s) { return -f(s, order); }, grid.sup_grid, exec);
  e.value = -e.value;
  return e;
}

double sup_norm(const PeriodicFunction& f, int order, const GridSettings& grid, Exec exec) {
  check_order(order);
  return periodic_max([&](double s) { return std::abs(f(s, order)); }, grid.sup_grid, exec).value;
}

// ---------------------------------------------------------------- quadrature

double integrate_over_period(const PeriodicFunction& f, const GridSettings& grid) {
  auto g = [&](double s) { return f(s); };
  auto sum = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
  };
  std::size_t panels = 64;
  double h = kTwoPi / static_cast<double>(panels);
  double trap = h * sum(sample_grid(g, 0.0, kTwoPi, panels));
  double simpson_prev = std::numeric_limits<double>::quiet_NaN();
  while (2 * panels <= grid.quad_max_panels) {
    const double mids = sum(sample_grid(g, 0.5 * h, kTwoPi + 0.5 * h, panels));
    const double trap2 = 0.5 * trap + 0.5 * h * mids;
    const double simpson = (4.0 * trap2 - trap) / 3.0;
    panels *= 2;
    h *= 0.5;
    trap = trap2;
    if (std::abs(simpson - simpson_prev) < grid.quad_tol) return simpson;
    simpson_prev = simpson;
  }
  throw Error(ErrorKind::NonConvergence,
              "composite Simpson did not reach tolerance within " + std::to_string(grid.quad_max_panels) +
                  " panels");
}

// ---------------------------------------------------------------- periodic linear ODE

PeriodicSolution solve_periodic_linear_detailed(const PeriodicFunction& a, const PeriodicFunction& b,
                                                const GridSettings& grid) {
  const double integral_a = integrate_over_period(a, grid);
  if (!(integral_a > 1e-12)) {
    throw Error(ErrorKind::DegenerateMonodromy,
                "integral of a over one period is " + std::to_string(integral_a) + " (needs > 1e-12)");
  }
  const std::size_t n = grid.sample_count;
  const double h = kTwoPi / static_cast<double>(n);

  // Quarter-cell samples of a, half-cell samples of b.
  const std::vector<double> aq = sample_grid([&](double s) { return a(s); }, 0.0, kTwoPi, 4 * n);
  const std::vector<double> bh = sample_grid([&](double s) { return b(s); }, 0.0, kTwoPi, 2 * n);

  std::vector<double> decay(n);   // e^{−∫ over cell k of a}
  std::vector<double> forcing(n); // ∫ over cell of b(r) e^{−(A(s_{k+1}) − A(r))} dr
  double total_a = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a0 = aq[4 * k];
    const double a1 = aq[4 * k + 1];
    const double am = aq[4 * k + 2];
    const double a3 = aq[4 * k + 3];
    const double ae = aq[(4 * k + 4) % (4 * n)];
    const double first_half = (0.5 * h / 6.0) * (a0 + 4.0 * a1 + am);
    const double second_half = (0.5 * h / 6.0) * (am + 4.0 * a3 + ae);
    const double cell = first_half + second_half;
    total_a += cell;
    decay[k] = std::exp(-cell);
    const double b0 = bh[2 * k];
    const double bm = bh[2 * k + 1];
    const double be = bh[(2 * k + 2) % (2 * n)];
    forcing[k] = (h / 6.0) * (b0 * decay[k] + 4.0 * bm * std::exp(-second_half) + be);
  }

  double from_zero = 0.0;
  for (std::size_t k = 0; k < n; ++k) from_zero = decay[k] * from_zero + forcing[k];
  const double u0 = from_zero / (-std::expm1(-total_a));

  std::vector<double> u(n);
  double cur = u0;
  for (std::size_t k = 0; k < n; ++k) {
    u[k] = cur;
    cur = decay[k] * cur + forcing[k];
  }
  const double gap = std::abs(cur - u0);

  std::vector<double> d1(n);
  std::vector<double> d2(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) * h;
    const Jet ja = a.jet(s);
    const Jet jb = b.jet(s);
    d1[k] = jb.value - ja.value * u[k];
    d2[k] = jb.d1 - ja.d1 * u[k] - ja.value * d1[k];
  }
  return {PeriodicFunction::sampled(std::move(u), std::move(d1), std::move(d2)), integral_a, gap};
}

PeriodicFunction solve_periodic_linear(const PeriodicFunction& a, const PeriodicFunction& b,
                                       const GridSettings& grid) {
  return solve_periodic_linear_detailed(a, b, grid).function;
}

}  // namespace winfree
