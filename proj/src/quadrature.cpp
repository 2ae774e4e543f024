#include "hml/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <queue>

#include "hml/errors.hpp"

namespace hml {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Graded sequences stop this far from a singular point; the rest is closed analytically.
constexpr double kInnermostRadius = 1e-9;
constexpr int kMaxCellDepth = 60;

// ---------------------------------------------------------------------------
// Gauss-Legendre rules on [-1, 1]

struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

GaussRule make_gauss_rule(int n) {
  GaussRule rule;
  rule.x.resize(static_cast<std::size_t>(n));
  rule.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Ascending order keeps the node sequence monotone in the radius.
    const auto idx = static_cast<std::size_t>(n - 1 - i);
    rule.x[idx] = x;
    rule.w[idx] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss_rule(int n) {
  static std::mutex mu;
  static std::vector<std::unique_ptr<GaussRule>> cache(65);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache.at(static_cast<std::size_t>(n));
  if (!slot) slot = std::make_unique<GaussRule>(make_gauss_rule(n));
  return *slot;
}

// ---------------------------------------------------------------------------
// Compensated accumulation in a fixed order

struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Fixed binary reduction tree.
double pairwise_sum(std::span<const double> x) {
  if (x.empty()) return 0.0;
  if (x.size() <= 8) return simd::scalar_kernels().compensated_sum(x);
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

// ---------------------------------------------------------------------------
// Periodic trapezoid rule with nested node doubling

struct AngularResult {
  double mean = 0.0;
  double error = 0.0;
  std::int64_t nodes = 0;
  int levels = 0;
  bool converged = false;
  bool singular = false;
};

/// evaluate(offset, step, count, out) fills out[k] = g(offset + k*step) and
/// returns true if any value was singular.
template <class Evaluate>
AngularResult periodic_mean(Evaluate&& evaluate, int n0, int cap_log2, double rel_tol) {
  AngularResult res;
  const std::int64_t cap = std::int64_t{1} << cap_log2;
  std::int64_t n = std::min<std::int64_t>(n0, cap);
  std::vector<double> vals(static_cast<std::size_t>(n));
  const auto& kern = simd::active();

  res.singular = evaluate(0.0, kTwoPi / static_cast<double>(n), vals);
  res.nodes = n;
  Accumulator total;
  total.add(kern.compensated_sum(vals));
  double l1 = kern.abs_sum(vals);
  double mean = total.value() / static_cast<double>(n);
  if (res.singular) {
    res.mean = mean;
    return res;
  }
  while (2 * n <= cap) {
    vals.assign(static_cast<std::size_t>(n), 0.0);
    const double step = kTwoPi / static_cast<double>(n);
    if (evaluate(0.5 * step, step, vals)) {
      res.singular = true;
      break;
    }
    res.nodes += n;
    total.add(kern.compensated_sum(vals));
    l1 += kern.abs_sum(vals);
    n *= 2;
    ++res.levels;
    const double next = total.value() / static_cast<double>(n);
    res.error = std::abs(next - mean);
    mean = next;
    const double scale = l1 / static_cast<double>(n);
    if (res.error <= rel_tol * scale || scale == 0.0) {
      res.converged = true;
      break;
    }
  }
  res.mean = mean;
  return res;
}

int next_pow2(double x) {
  int n = 16;
  while (n < x && n < (1 << 30)) n *= 2;
  return n;
}

int angular_floor(const AnalyticFunction& f, double r) {
  if (!f.boundary_singular()) return 16;
  return next_pow2(64.0 / (1.0 - r));
}

void fill_circle(double cx, double cy, double radius, double offset, double step,
                 std::span<double> re, std::span<double> im) {
  for (std::size_t k = 0; k < re.size(); ++k) {
    const double t = offset + static_cast<double>(k) * step;
    re[k] = cx + radius * std::cos(t);
    im[k] = cy + radius * std::sin(t);
  }
}

IntegralResult to_result(const AngularResult& a, double value_scale) {
  IntegralResult r;
  r.value = a.mean * value_scale;
  r.error = a.error * std::abs(value_scale);
  r.nodes = a.nodes;
  r.levels = a.levels;
  r.converged = a.converged && !a.singular;
  return r;
}

// ---------------------------------------------------------------------------
// Smooth partition of unity around zero patches

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

/// 1 on |x| <= 1/2, 0 on |x| >= 1.
double bump(double x) { return 1.0 - smooth_step(2.0 * x - 1.0); }

struct Patch {
  cplx center;
  double radius;
  double tail_exponent;  // a in A(t) ~ c t^(a-2)
};

// ---------------------------------------------------------------------------
// Area integrator

class AreaIntegrator {
 public:
  AreaIntegrator(const Fields& fields, FieldKind kind, double r_in, double r_out,
                 const Kernel& kernel, const QuadratureSpec& spec)
      : fields_(fields), kind_(kind), r_in_(r_in), r_out_(r_out), kernel_(kernel), spec_(spec),
        rule_(gauss_rule(spec.gauss_order)) {
    plan();
  }

  IntegralResult run();

 private:
  struct Eval {
    double value = 0.0;   // F(s)
    double error = 0.0;   // angular error carried into F
    bool singular = false;
  };
  struct Cell {
    int domain;  // -1 global, j >= 0 patch j
    double a, b;
    double coarse, left, right;
    double err;
    int depth;
  };

  void plan();
  Eval radial_integrand(int domain, double s);
  double gauss(int domain, double a, double b, double& err, bool& singular);
  Cell make_cell(int domain, double a, double b, double coarse, int depth);
  double tail(int domain, double h, double& err);

  double angular_tol() const { return 0.05 * spec_.tolerance; }
  double mask(cplx z) const;

  const Fields& fields_;
  FieldKind kind_;
  double r_in_;
  double r_out_;
  Kernel kernel_;
  QuadratureSpec spec_;
  const GaussRule& rule_;

  std::vector<Patch> patches_;
  double origin_exponent_ = 2.0;
  double origin_tail_h_ = 0.0;
  std::vector<double> global_breaks_;
  std::vector<std::vector<double>> patch_breaks_;
  int theta0_ = 16;
  std::int64_t nodes_ = 0;
};

double AreaIntegrator::mask(cplx z) const {
  double m = 1.0;
  for (const Patch& p : patches_) {
    const double x = std::abs(z - p.center) / p.radius;
    if (x < 1.0) m -= bump(x);
  }
  return m;
}

void AreaIntegrator::plan() {
  const int depth = spec_.effective_grade_depth();
  const auto& zeros = fields_.zeros();

  // Zeros on or next to the domain boundary circles are refused.
  for (const Zero& z : zeros) {
    const double m = std::abs(z.location);
    if (std::abs(m - r_out_) < kCircleGuard || (r_in_ > 0.0 && std::abs(m - r_in_) < kCircleGuard))
      throw CircleProximityError("zero lies within 1e-8 of an integration circle", r_out_,
                                 std::abs(m - r_out_));
  }

  double min_nonorigin = 1.0;
  for (const Zero& z : zeros) {
    const double m = std::abs(z.location);
    if (m == 0.0) {
      if (r_in_ == 0.0) origin_exponent_ = fields_.singular_exponent(kind_, z.order) + 2.0;
      continue;
    }
    min_nonorigin = std::min(min_nonorigin, m);
    if (!fields_.zero_is_nonsmooth(z.order) || m <= r_in_ || m >= r_out_) continue;
    double rho = 0.25;
    rho = std::min(rho, 0.45 * m);
    rho = std::min(rho, 0.45 * (r_out_ - m));
    if (r_in_ > 0.0) rho = std::min(rho, 0.45 * (m - r_in_));
    for (const Zero& other : zeros)
      if (&other != &z) rho = std::min(rho, 0.45 * std::abs(other.location - z.location));
    patches_.push_back({z.location, rho, fields_.singular_exponent(kind_, z.order) + 2.0});
  }

  theta0_ = std::max(spec_.theta_init << spec_.refine, angular_floor(fields_.function(), r_out_));

  // Global radial breakpoints.
  std::vector<double> br{r_in_, r_out_};
  for (int k = 1; k < spec_.initial_annuli; ++k)
    br.push_back(r_in_ + (r_out_ - r_in_) * k / spec_.initial_annuli);
  if (r_in_ == 0.0) {
    double h = r_out_;
    const double limit = std::max(kInnermostRadius, 0.0);
    int levels = 0;
    while (levels < depth && h / 2.0 >= limit) {
      h /= 2.0;
      br.push_back(h);
      ++levels;
    }
    // Keep the analytic tail well inside the nearest off-origin zero.
    while (h > 0.01 * min_nonorigin && h / 2.0 >= limit && levels < 40) {
      h /= 2.0;
      br.push_back(h);
      ++levels;
    }
    origin_tail_h_ = h;
  }
  for (const Patch& p : patches_) {
    const double m = std::abs(p.center);
    for (double d : {-1.0, -0.5, 0.0, 0.5, 1.0}) br.push_back(m + d * p.radius);
  }
  const double gap = 1.0 - r_out_;
  if (gap < 0.25) {
    for (double d = gap; 1.0 - 2.0 * d > r_in_ && d < 0.5; d *= 2.0) br.push_back(1.0 - 2.0 * d);
  }
  const double lo = r_in_ == 0.0 ? origin_tail_h_ : r_in_;
  std::erase_if(br, [&](double v) { return v < lo || v > r_out_; });
  br.push_back(lo);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end(),
                       [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::max(1.0, b); }),
           br.end());
  global_breaks_ = std::move(br);

  for (const Patch& p : patches_) {
    std::vector<double> pb{p.radius};
    for (int k = 1; k < 4; ++k) pb.push_back(p.radius * (0.5 + 0.125 * k));
    double h = p.radius / 2.0;
    pb.push_back(h);
    int levels = 1;
    while (levels < depth && h / 2.0 >= kInnermostRadius) {
      h /= 2.0;
      pb.push_back(h);
      ++levels;
    }
    std::sort(pb.begin(), pb.end());
    patch_breaks_.push_back(std::move(pb));
  }
}

AreaIntegrator::Eval AreaIntegrator::radial_integrand(int domain, double s) {
  Eval out;
  const auto n0 = theta0_;
  const int cap = spec_.theta_cap_log2;
  std::vector<double> re;
  std::vector<double> im;
  std::vector<double> fv;
  std::vector<double> weights;
  std::vector<std::size_t> live;

  if (domain < 0) {
    auto evaluate = [&](double offset, double step, std::span<double> vals) {
      const std::size_t n = vals.size();
      re.resize(n);
      im.resize(n);
      fill_circle(0.0, 0.0, s, offset, step, re, im);
      if (patches_.empty()) {
        return fields_.eval_batch(kind_, {re, im}, vals);
      }
      // Drop nodes fully covered by a patch; weight the transition zone.
      live.clear();
      weights.clear();
      for (std::size_t k = 0; k < n; ++k) {
        const double m = mask(cplx{re[k], im[k]});
        vals[k] = 0.0;
        if (m > 0.0) {
          live.push_back(k);
          weights.push_back(m);
        }
      }
      std::vector<double> lre(live.size());
      std::vector<double> lim(live.size());
      for (std::size_t i = 0; i < live.size(); ++i) {
        lre[i] = re[live[i]];
        lim[i] = im[live[i]];
      }
      fv.resize(live.size());
      const bool sing = fields_.eval_batch(kind_, {lre, lim}, fv);
      for (std::size_t i = 0; i < live.size(); ++i) vals[live[i]] = fv[i] * weights[i];
      return sing;
    };
    const AngularResult a = periodic_mean(evaluate, n0, cap, angular_tol());
    nodes_ += a.nodes;
    const double factor = kTwoPi * s * kernel_.value(s);
    out.value = a.mean * factor;
    out.error = a.error * std::abs(factor);
    out.singular = a.singular;
    return out;
  }

  const Patch& patch = patches_[static_cast<std::size_t>(domain)];
  const double chi = bump(s / patch.radius);
  auto evaluate = [&](double offset, double step, std::span<double> vals) {
    const std::size_t n = vals.size();
    re.resize(n);
    im.resize(n);
    fill_circle(patch.center.real(), patch.center.imag(), s, offset, step, re, im);
    const bool sing = fields_.eval_batch(kind_, {re, im}, vals);
    for (std::size_t k = 0; k < n; ++k)
      vals[k] *= kernel_.value(std::hypot(re[k], im[k]));
    return sing;
  };
  const AngularResult a = periodic_mean(evaluate, spec_.theta_init << spec_.refine, cap, angular_tol());
  nodes_ += a.nodes;
  const double factor = kTwoPi * s * chi;
  out.value = a.mean * factor;
  out.error = a.error * std::abs(factor);
  out.singular = a.singular;
  return out;
}

double AreaIntegrator::gauss(int domain, double a, double b, double& err, bool& singular) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Accumulator acc;
  Accumulator acc_err;
  for (std::size_t i = 0; i < rule_.x.size(); ++i) {
    const Eval e = radial_integrand(domain, mid + half * rule_.x[i]);
    if (e.singular) singular = true;
    acc.add(rule_.w[i] * e.value);
    acc_err.add(rule_.w[i] * e.error);
  }
  err += half * acc_err.value();
  return half * acc.value();
}

AreaIntegrator::Cell AreaIntegrator::make_cell(int domain, double a, double b, double coarse,
                                               int depth) {
  Cell c{domain, a, b, coarse, 0.0, 0.0, 0.0, depth};
  double ang_err = 0.0;
  bool singular = false;
  const double m = 0.5 * (a + b);
  c.left = gauss(domain, a, m, ang_err, singular);
  c.right = gauss(domain, m, b, ang_err, singular);
  c.err = singular ? std::numeric_limits<double>::infinity()
                   : std::abs(c.left + c.right - c.coarse) + ang_err;
  return c;
}

// Closes (0, h) of a graded sequence from the local power law A(t) ~ c t^(a-2).
double AreaIntegrator::tail(int domain, double h, double& err) {
  const double a = domain < 0 ? origin_exponent_
                              : patches_[static_cast<std::size_t>(domain)].tail_exponent;
  auto coefficient = [&](double t) {
    const Eval e = radial_integrand(domain, t);
    if (e.singular) throw SingularPointError("graded mesh reached a singular point");
    // F(t) = t * K(t) * A(t) globally, t * A(t) (kernel folded in) in a patch.
    const double kfac = domain < 0 ? kernel_.value(t) : 1.0;
    return e.value / (t * kfac) * std::pow(t, 2.0 - a);
  };
  const double c1 = coefficient(h);
  const double c2 = coefficient(0.5 * h);
  const double moment = domain < 0 ? kernel_.power_moment(a, h) : std::pow(h, a) / a;
  err = std::abs(c1 - c2) * std::abs(moment);
  return c1 * moment;
}

IntegralResult AreaIntegrator::run() {
  std::vector<Cell> cells;
  auto seed = [&](int domain, const std::vector<double>& breaks) {
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double a = breaks[i];
      const double b = breaks[i + 1];
      const int pieces = 1 << spec_.refine;
      for (int k = 0; k < pieces; ++k) {
        const double ca = a + (b - a) * k / pieces;
        const double cb = a + (b - a) * (k + 1) / pieces;
        double e = 0.0;
        bool sing = false;
        const double coarse = gauss(domain, ca, cb, e, sing);
        cells.push_back(make_cell(domain, ca, cb, sing ? 0.0 : coarse, 0));
        if (sing) cells.back().err = std::numeric_limits<double>::infinity();
      }
    }
  };
  seed(-1, global_breaks_);
  for (std::size_t j = 0; j < patches_.size(); ++j) seed(static_cast<int>(j), patch_breaks_[j]);

  double tail_value = 0.0;
  double tail_err = 0.0;
  if (r_in_ == 0.0) {
    double e = 0.0;
    tail_value += tail(-1, origin_tail_h_, e);
    tail_err += e;
  }
  for (std::size_t j = 0; j < patches_.size(); ++j) {
    double e = 0.0;
    tail_value += tail(static_cast<int>(j), patch_breaks_[j].front(), e);
    tail_err += e;
  }

  auto cmp = [&](std::size_t x, std::size_t y) {
    if (cells[x].err != cells[y].err) return cells[x].err < cells[y].err;
    if (cells[x].domain != cells[y].domain) return cells[x].domain > cells[y].domain;
    return cells[x].a > cells[y].a;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
  for (std::size_t i = 0; i < cells.size(); ++i) heap.push(i);
  std::vector<bool> retired(cells.size(), false);

  auto totals = [&](double& value, double& err, double& scale) {
    Accumulator v;
    Accumulator e;
    Accumulator sc;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (retired[i]) continue;
      v.add(cells[i].left + cells[i].right);
      e.add(cells[i].err);
      sc.add(std::abs(cells[i].left) + std::abs(cells[i].right));
    }
    value = v.value() + tail_value;
    err = e.value() + tail_err;
    scale = sc.value() + std::abs(tail_value);
  };

  int max_depth = 0;
  bool converged = false;
  int live_cells = static_cast<int>(cells.size());
  for (;;) {
    double value = 0.0;
    double err = 0.0;
    double scale = 0.0;
    totals(value, err, scale);
    if (err <= spec_.tolerance * std::max(1.0, std::abs(value)) || scale == 0.0) {
      converged = std::isfinite(err);
      break;
    }
    if (live_cells >= spec_.max_cells || heap.empty()) break;
    const std::size_t worst = heap.top();
    heap.pop();
    const Cell c = cells[worst];
    if (c.depth >= kMaxCellDepth) {
      if (!std::isfinite(c.err))
        throw SingularPointError("singular node persists at the cell depth cap");
      break;
    }
    retired[worst] = true;
    const double m = 0.5 * (c.a + c.b);
    cells.push_back(make_cell(c.domain, c.a, m, c.left, c.depth + 1));
    cells.push_back(make_cell(c.domain, m, c.b, c.right, c.depth + 1));
    retired.push_back(false);
    retired.push_back(false);
    heap.push(cells.size() - 2);
    heap.push(cells.size() - 1);
    ++live_cells;
    max_depth = std::max(max_depth, c.depth + 1);
  }

  // Final value in a fixed order: by domain, then position.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (!retired[i]) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (cells[x].domain != cells[y].domain) return cells[x].domain < cells[y].domain;
    return cells[x].a < cells[y].a;
  });
  std::vector<double> parts;
  std::vector<double> errs;
  for (std::size_t i : order) {
    parts.push_back(cells[i].left + cells[i].right);
    errs.push_back(cells[i].err);
  }
  parts.push_back(tail_value);
  errs.push_back(tail_err);

  IntegralResult res;
  res.value = pairwise_sum(parts);
  res.error = pairwise_sum(errs);
  res.nodes = nodes_;
  res.levels = max_depth;
  res.converged = converged && res.error <= spec_.tolerance * std::max(1.0, std::abs(res.value));
  return res;
}

}  // namespace

// ---------------------------------------------------------------------------
// Kernel

double Kernel::value(double s) const noexcept {
  switch (kind) {
    case KernelKind::log_r_over_abs:
      return std::log(radius / s);
    case KernelKind::log_one_over_abs:
      return -std::log(s);
    case KernelKind::one:
      return 1.0;
    case KernelKind::one_minus_abs_sq:
      return 1.0 - s * s;
  }
  return 0.0;
}

cplx Kernel::gradient(cplx z) const noexcept {
  switch (kind) {
    case KernelKind::log_r_over_abs:
    case KernelKind::log_one_over_abs:
      return -z / std::norm(z);
    case KernelKind::one:
      return 0.0;
    case KernelKind::one_minus_abs_sq:
      return -2.0 * z;
  }
  return 0.0;
}

double Kernel::power_moment(double a, double h) const noexcept {
  const double ha = std::pow(h, a);
  switch (kind) {
    case KernelKind::log_r_over_abs:
      return ha / a * std::log(radius / h) + ha / (a * a);
    case KernelKind::log_one_over_abs:
      return ha / a * std::log(1.0 / h) + ha / (a * a);
    case KernelKind::one:
      return ha / a;
    case KernelKind::one_minus_abs_sq:
      return ha / a - std::pow(h, a + 2.0) / (a + 2.0);
  }
  return 0.0;
}

std::string Kernel::name() const {
  switch (kind) {
    case KernelKind::log_r_over_abs:
      return "log_r_over_abs";
    case KernelKind::log_one_over_abs:
      return "log_one_over_abs";
    case KernelKind::one:
      return "one";
    case KernelKind::one_minus_abs_sq:
      return "one_minus_abs_sq";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// QuadratureSpec

void QuadratureSpec::validate() const {
  if (!(tolerance > 0.0)) throw InvariantError("tolerance must be positive");
  if (theta_init < 16 || (theta_init & (theta_init - 1)) != 0)
    throw InvariantError("theta_init must be a power of two >= 16");
  if (theta_cap_log2 < 4 || theta_cap_log2 > 24)
    throw InvariantError("theta_cap_log2 must lie in [4, 24]");
  if ((1 << theta_cap_log2) < theta_init) throw InvariantError("angular cap below theta_init");
  if (grade_depth < 0 || grade_depth > 40) throw InvariantError("grading depth must lie in [0, 40]");
  if (initial_annuli < 1) throw InvariantError("initial_annuli must be >= 1");
  if (gauss_order < 2 || gauss_order > 64) throw InvariantError("gauss_order must lie in [2, 64]");
  if (max_cells < 1) throw InvariantError("max_cells must be >= 1");
  if (refine < 0 || refine > 4) throw InvariantError("refine must lie in [0, 4]");
}

int QuadratureSpec::effective_grade_depth() const noexcept {
  if (grade_depth > 0) return grade_depth;
  return std::clamp(static_cast<int>(std::ceil(std::log2(1.0 / tolerance))), 4, 40);
}

// ---------------------------------------------------------------------------
// Circle integrals

IntegralResult circle_mean(const Fields& fields, double r, const QuadratureSpec& spec) {
  spec.validate();
  checked_radius(r);
  const int n0 = std::max(spec.theta_init << spec.refine, angular_floor(fields.function(), r));
  std::vector<double> re;
  std::vector<double> im;
  auto evaluate = [&](double offset, double step, std::span<double> vals) {
    re.resize(vals.size());
    im.resize(vals.size());
    fill_circle(0.0, 0.0, r, offset, step, re, im);
    return fields.eval_batch(FieldKind::weight_W, {re, im}, vals);
  };
  const AngularResult a = periodic_mean(evaluate, n0, spec.theta_cap_log2, spec.tolerance);
  IntegralResult res = to_result(a, 1.0);
  res.converged = res.converged && res.error <= spec.tolerance * std::max(1.0, std::abs(res.value));
  return res;
}

IntegralResult circle_mean(const AnalyticFunction& f, const MeanParams& params, double r,
                           const QuadratureSpec& spec) {
  return circle_mean(Fields(f, params), r, spec);
}

IntegralResult circle_mean_deriv(const Fields& fields, double r, const QuadratureSpec& spec) {
  spec.validate();
  checked_radius(r);
  if (fields.params().p < 1.0) {
    for (const Zero& z : fields.zeros()) {
      const double d = std::abs(std::abs(z.location) - r);
      if (d < 1e-6)
        throw CircleProximityError("zero within 1e-6 of |z| = r with p < 1; perturb r", r, d);
    }
  }
  const int n0 = std::max(spec.theta_init << spec.refine, angular_floor(fields.function(), r));
  std::vector<double> re;
  std::vector<double> im;
  auto evaluate = [&](double offset, double step, std::span<double> vals) {
    re.resize(vals.size());
    im.resize(vals.size());
    fill_circle(0.0, 0.0, r, offset, step, re, im);
    return fields.eval_batch(FieldKind::radial_deriv_W, {re, im}, vals);
  };
  const AngularResult a = periodic_mean(evaluate, n0, spec.theta_cap_log2, spec.tolerance);
  IntegralResult res = to_result(a, 1.0);
  res.converged = res.converged && res.error <= spec.tolerance * std::max(1.0, std::abs(res.value));
  return res;
}

IntegralResult circle_mean_deriv(const AnalyticFunction& f, const MeanParams& params, double r,
                                 const QuadratureSpec& spec) {
  return circle_mean_deriv(Fields(f, params), r, spec);
}

// ---------------------------------------------------------------------------
// Area integrals

IntegralResult annulus_integral(const Fields& fields, FieldKind field, double r_in, double r_out,
                                const Kernel& kernel, const QuadratureSpec& spec) {
  spec.validate();
  checked_radius(r_out);
  if (!(r_in >= 0.0 && r_in < r_out)) throw InvariantError("annulus needs 0 <= r_in < r_out");
  if (field == FieldKind::radial_deriv_W)
    throw InvariantError("area integrals run over G or W only");
  AreaIntegrator integrator(fields, field, r_in, r_out, kernel, spec);
  return integrator.run();
}

IntegralResult disk_integral_G(const Fields& fields, double r, const Kernel& kernel,
                               const QuadratureSpec& spec) {
  return annulus_integral(fields, FieldKind::laplacian_G, 0.0, r, kernel, spec);
}

IntegralResult disk_integral_G(const AnalyticFunction& f, const MeanParams& params, double r,
                               const Kernel& kernel, const QuadratureSpec& spec) {
  return disk_integral_G(Fields(f, params), r, kernel, spec);
}

IntegralResult disk_integral_W(const Fields& fields, double r, const Kernel& weight,
                               const QuadratureSpec& spec) {
  if (weight.kind != KernelKind::one && weight.kind != KernelKind::one_minus_abs_sq)
    throw InvariantError("disk_integral_W weight must be one or one_minus_abs_sq");
  return annulus_integral(fields, FieldKind::weight_W, 0.0, r, weight, spec);
}

IntegralResult disk_integral_W(const AnalyticFunction& f, const MeanParams& params, double r,
                               const Kernel& weight, const QuadratureSpec& spec) {
  return disk_integral_W(Fields(f, params), r, weight, spec);
}

// ---------------------------------------------------------------------------
// Ring integrals

IntegralResult ring_integral(const Fields& fields, cplx center, double eps, const Kernel& kernel,
                             double r, const QuadratureSpec& spec) {
  spec.validate();
  checked_radius(r);
  if (kernel.kind == KernelKind::one)
    throw InvariantError("ring integrals take a log kernel or one_minus_abs_sq");
  if (!(eps > 10.0 * kFieldGuard)) throw GeometryError("ring radius must exceed 10x the field guard");
  if (!(std::abs(center) + eps < r)) throw GeometryError("ring disk D(z0, eps) must lie inside D_r");
  if (kernel.singular_at_origin() && std::abs(std::abs(center) - eps) < kFieldGuard)
    throw GeometryError("ring passes through the kernel singularity at the origin");

  auto evaluate = [&](double offset, double step, std::span<double> vals) {
    bool singular = false;
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const double t = offset + static_cast<double>(k) * step;
      const cplx n{std::cos(t), std::sin(t)};
      const cplx z = center + eps * n;
      const GradientValue g = fields.grad_W(z);
      if (g.singular) singular = true;
      const double dW_dn = g.grad[0] * n.real() + g.grad[1] * n.imag();
      const cplx gk = kernel.gradient(z);
      const double dK_dn = gk.real() * n.real() + gk.imag() * n.imag();
      vals[k] = (kernel.value(std::abs(z)) * dW_dn - fields.W(z) * dK_dn) * eps;
    }
    return singular;
  };
  const AngularResult a =
      periodic_mean(evaluate, std::max(spec.theta_init, 32) << spec.refine, spec.theta_cap_log2,
                    spec.tolerance);
  return to_result(a, kTwoPi);
}

IntegralResult ring_integral(const AnalyticFunction& f, const MeanParams& params, cplx center,
                             double eps, const Kernel& kernel, double r,
                             const QuadratureSpec& spec) {
  return ring_integral(Fields(f, params), center, eps, kernel, r, spec);
}

}  // namespace hml
