#include "qpsa/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace qpsa::optimize {

void GlobalOptOptions::validate() const {
  if (gamma >= 0.0) throw InputError("gamma must be a negative curvature bound");
  if (gap_tol <= 0.0) throw InputError("gap_tol must be positive");
  if (max_evals < 1) throw InputError("max_evals must be >= 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Support {
  RealVector nu;
  double f = 0.0;
  std::optional<RealVector> g;
};

double eval_support(const Support& s, double gamma, double lipschitz,
                    const RealVector& nu) {
  const RealVector d = nu - s.nu;
  const double dn2 = d.squaredNorm();
  if (s.g) return s.f + s.g->dot(d) + 0.5 * gamma * dn2;
  return s.f + 0.5 * gamma * dn2 - lipschitz * std::sqrt(dn2);
}

double eval_envelope(const std::vector<Support>& supports, double gamma,
                     double lipschitz, const RealVector& nu) {
  double val = -kInf;
  for (const auto& s : supports)
    val = std::max(val, eval_support(s, gamma, lipschitz, nu));
  return val;
}

// ---------------------------------------------------------------- d = 1 --
//
// Every support shares the quadratic term (gamma/2) nu^2, so the envelope
// is that parabola plus a piecewise-linear function: one line per gradient
// support, a min of two half-lines per gradient-free support. The envelope
// minimum over an interval is attained at the interval ends or at a
// breakpoint of the linear part.

struct Line {
  double b = 0.0;  // slope
  double c = 0.0;  // intercept

  double eval(double x) const { return b * x + c; }
};

// upper envelope of lines, sorted by slope; returns hull lines and their
// breakpoints (ascending)
void build_hull(std::vector<Line> lines, std::vector<Line>* hull,
                std::vector<double>* breaks) {
  hull->clear();
  breaks->clear();
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    if (a.b != b.b) return a.b < b.b;
    return a.c < b.c;
  });
  for (const Line& l : lines) {
    if (!hull->empty() && hull->back().b == l.b) {
      if (hull->back().c >= l.c) continue;
      hull->pop_back();
    }
    while (hull->size() >= 2) {
      const Line& l1 = (*hull)[hull->size() - 2];
      const Line& l2 = hull->back();
      // l2 is dominated if l and l1 intersect left of the l1-l2
      // intersection; both slope differences are negative, so the
      // cross-multiplied test keeps its direction
      const double lhs = (l.c - l1.c) * (l1.b - l2.b);
      const double rhs = (l2.c - l1.c) * (l1.b - l.b);
      if (lhs <= rhs)
        hull->pop_back();
      else
        break;
    }
    hull->push_back(l);
  }
  for (std::size_t i = 0; i + 1 < hull->size(); ++i) {
    const Line& a = (*hull)[i];
    const Line& b = (*hull)[i + 1];
    breaks->push_back((a.c - b.c) / (b.b - a.b));
  }
}

double eval_hull(const std::vector<Line>& hull,
                 const std::vector<double>& breaks, double x) {
  if (hull.empty()) return -kInf;
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  return hull[static_cast<std::size_t>(it - breaks.begin())].eval(x);
}

struct Envelope1D {
  double gamma = 0.0;
  std::vector<Line> hull;
  std::vector<double> breaks;
  // gradient-free supports as (kink position, left line, right line)
  struct Cone {
    double kink;
    Line left, right;
  };
  std::vector<Cone> cones;

  double eval(double x) const {
    double lin = eval_hull(hull, breaks, x);
    for (const auto& c : cones)
      lin = std::max(lin, std::min(c.left.eval(x), c.right.eval(x)));
    return 0.5 * gamma * x * x + lin;
  }
};

Envelope1D build_envelope_1d(const std::vector<Support>& supports,
                             double gamma, double lipschitz) {
  Envelope1D env;
  env.gamma = gamma;
  std::vector<Line> lines;
  for (const auto& s : supports) {
    const double nu = s.nu(0);
    if (s.g) {
      const double g = (*s.g)(0);
      lines.push_back({g - gamma * nu, s.f - g * nu + 0.5 * gamma * nu * nu});
    } else {
      Envelope1D::Cone c;
      c.kink = nu;
      const double base = s.f + 0.5 * gamma * nu * nu;
      c.right = {-gamma * nu - lipschitz, base + lipschitz * nu};
      c.left = {-gamma * nu + lipschitz, base - lipschitz * nu};
      env.cones.push_back(c);
    }
  }
  build_hull(std::move(lines), &env.hull, &env.breaks);
  return env;
}

void append_intersection(const Line& a, const Line& b, double lo, double hi,
                         std::vector<double>* cand) {
  if (a.b == b.b) return;
  const double x = (a.c - b.c) / (b.b - a.b);
  if (x > lo && x < hi) cand->push_back(x);
}

// exact envelope minimum over [lo, hi]
std::pair<double, double> envelope_min_1d(const Envelope1D& env, double lo,
                                          double hi) {
  std::vector<double> cand = {lo, hi};
  for (double b : env.breaks)
    if (b > lo && b < hi) cand.push_back(b);
  for (const auto& c : env.cones) {
    if (c.kink > lo && c.kink < hi) cand.push_back(c.kink);
    for (const Line& h : env.hull) {
      append_intersection(c.left, h, lo, hi, &cand);
      append_intersection(c.right, h, lo, hi, &cand);
    }
    for (const auto& c2 : env.cones) {
      if (&c2 == &c) continue;
      append_intersection(c.left, c2.left, lo, hi, &cand);
      append_intersection(c.left, c2.right, lo, hi, &cand);
      append_intersection(c.right, c2.left, lo, hi, &cand);
      append_intersection(c.right, c2.right, lo, hi, &cand);
    }
  }
  double best_x = lo;
  double best_v = kInf;
  for (double x : cand) {
    const double v = env.eval(x);
    if (v < best_v || (v == best_v && x < best_x)) {
      best_v = v;
      best_x = x;
    }
  }
  return {best_x, best_v};
}

// --------------------------------------------------------- d = 2 (B&B) --

double support_box_bound(const Support& s, double gamma, double lipschitz,
                         const RealVector& lo, const RealVector& hi) {
  double lin = 0.0;
  double maxdist2 = 0.0;
  for (Index i = 0; i < lo.size(); ++i) {
    const double a = lo(i) - s.nu(i);
    const double b = hi(i) - s.nu(i);
    maxdist2 += std::max(a * a, b * b);
    if (s.g) lin += std::min((*s.g)(i) * a, (*s.g)(i) * b);
  }
  double bound = s.f + lin + 0.5 * gamma * maxdist2;
  if (!s.g) bound -= lipschitz * std::sqrt(maxdist2);
  return bound;
}

struct BoxNode {
  RealVector lo, hi;
  double bound = -kInf;
  std::size_t epoch = 0;  // supports seen when bound was computed
  std::uint64_t id = 0;
};

struct NodeOrder {
  bool operator()(const BoxNode& a, const BoxNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap
    return a.id > b.id;
  }
};

class BranchAndBound {
public:
  BranchAndBound(const Box& box, double gamma, double lipschitz)
      : gamma_(gamma), lipschitz_(lipschitz) {
    BoxNode root{box.lower, box.upper, -kInf, 0, next_id_++};
    heap_.push(root);
  }

  // Approximately minimize the envelope: refine until the heap's smallest
  // bound is within a working accuracy of the best exact envelope value
  // seen. The working accuracy adapts to the current incumbent-bound gap so
  // early calls stay cheap; gap_floor bounds it from below. Returns the
  // best point and the certified lower bound on the envelope minimum.
  std::pair<RealVector, double> minimize(const std::vector<Support>& supports,
                                         double gap_floor, int max_pops) {
    double best_val = kInf;
    RealVector best_pt;
    auto consider = [&](const RealVector& p) {
      const double v = eval_envelope(supports, gamma_, lipschitz_, p);
      if (v < best_val) {
        best_val = v;
        best_pt = p;
      }
    };
    if (last_best_.size() > 0) consider(last_best_);
    consider(supports.back().nu);

    int pops = 0;
    while (!heap_.empty() && pops < max_pops &&
           heap_.size() < static_cast<std::size_t>(max_nodes_)) {
      BoxNode node = heap_.top();
      heap_.pop();
      ++pops;
      if (node.epoch < supports.size()) {
        refresh(node, supports);
        heap_.push(node);
        continue;
      }
      const double delta =
          std::max(gap_floor, 0.02 * std::abs(best_val - node.bound));
      if (node.bound >= best_val - delta) {
        heap_.push(std::move(node));
        break;
      }
      // split along the longest edge
      Index axis = 0;
      (node.hi - node.lo).maxCoeff(&axis);
      const double mid = 0.5 * (node.lo(axis) + node.hi(axis));
      for (int side = 0; side < 2; ++side) {
        BoxNode child = node;
        child.id = next_id_++;
        if (side == 0)
          child.hi(axis) = mid;
        else
          child.lo(axis) = mid;
        child.epoch = 0;
        child.bound = -kInf;
        refresh(child, supports);
        // only bound-competitive children can lower the incumbent
        if (child.bound < best_val) consider(0.5 * (child.lo + child.hi));
        heap_.push(std::move(child));
      }
    }
    if (best_pt.size() == 0) {
      best_pt = heap_.empty() ? RealVector() : 0.5 * (heap_.top().lo + heap_.top().hi);
      consider(best_pt);
    }
    last_best_ = best_pt;
    // the smallest heap key is a valid lower bound on the envelope minimum;
    // stale keys only understate it
    const double lower = heap_.empty() ? best_val : heap_.top().bound;
    return {best_pt, lower};
  }

private:
  void refresh(BoxNode& node, const std::vector<Support>& supports) {
    for (std::size_t k = node.epoch; k < supports.size(); ++k)
      node.bound = std::max(node.bound, support_box_bound(supports[k], gamma_,
                                                          lipschitz_, node.lo,
                                                          node.hi));
    node.epoch = supports.size();
  }

  double gamma_;
  double lipschitz_;
  std::priority_queue<BoxNode, std::vector<BoxNode>, NodeOrder> heap_;
  std::uint64_t next_id_ = 1;
  int max_nodes_ = 400000;
  RealVector last_best_;
};

}  // namespace

OptRun global_minimize(const Evaluator& f, const Box& box,
                       const GlobalOptOptions& opts) {
  opts.validate();
  box.validate();
  const Index d = box.dim();
  if (d > 2) throw InputError("global_minimize handles d in {1, 2}");

  OptRun run;
  std::vector<Support> supports;
  double best_f = kInf;
  RealVector best_nu;

  auto evaluate = [&](const RealVector& nu) {
    const ObjectiveSample s = f(nu);
    run.evals.push_back({nu, s.value});
    supports.push_back({nu, s.value, s.gradient});
    if (s.value < best_f) {
      best_f = s.value;
      best_nu = nu;
    }
    return s;
  };

  if (opts.initial_points.empty()) {
    evaluate(0.5 * (box.lower + box.upper));
  } else {
    for (const auto& nu : opts.initial_points) evaluate(box.clamp(nu));
  }

  // golden-section refinement of the incumbent along a direction; immune
  // to the gradient kinks that stall BFGS inside nonsmooth valleys
  auto line_refine = [&](const RealVector& dir) {
    const double dn = dir.norm();
    if (dn == 0.0) return;
    const RealVector u = dir / dn;
    // largest parameter interval keeping best_nu + t*u inside the box
    double t_lo = -kInf, t_hi = kInf;
    for (Index i = 0; i < d; ++i) {
      if (u(i) == 0.0) continue;
      const double a = (box.lower(i) - best_nu(i)) / u(i);
      const double b = (box.upper(i) - best_nu(i)) / u(i);
      t_lo = std::max(t_lo, std::min(a, b));
      t_hi = std::min(t_hi, std::max(a, b));
    }
    if (!(t_hi > t_lo)) return;
    const RealVector base = best_nu;
    auto val = [&](double t) { return evaluate(box.clamp(base + t * u)).value; };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = t_lo, hi = t_hi;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = val(x1), f2 = val(x2);
    for (int it = 0;
         it < 90 && hi - lo > 1e-12 * (1.0 + std::abs(lo) + std::abs(hi));
         ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = val(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = val(x2);
      }
    }
  };

  // nested refinement for two-parameter valleys: golden-section over one
  // axis of the inner-minimized other axis. Transverse kinks cancel inside
  // the inner minimization, leaving the smooth valley-floor profile.
  auto nested_refine = [&](Index outer_axis) {
    const Index inner_axis = 1 - outer_axis;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    auto inner_min = [&](double t) {
      double lo = box.lower(inner_axis), hi = box.upper(inner_axis);
      RealVector probe = best_nu;
      probe(outer_axis) = t;
      auto val = [&](double s) {
        probe(inner_axis) = s;
        return evaluate(probe).value;
      };
      double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
      double f1 = val(x1), f2 = val(x2);
      for (int it = 0; it < 60 && hi - lo > 1e-10 * (1.0 + std::abs(hi));
           ++it) {
        if (f1 <= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - phi * (hi - lo);
          f1 = val(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + phi * (hi - lo);
          f2 = val(x2);
        }
      }
      return std::min(f1, f2);
    };
    double lo = box.lower(outer_axis), hi = box.upper(outer_axis);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = inner_min(x1), f2 = inner_min(x2);
    for (int it = 0; it < 60 && hi - lo > 1e-9 * (1.0 + std::abs(hi)); ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = inner_min(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = inner_min(x2);
      }
    }
  };

  int polishes = 0;
  auto polish_incumbent = [&]() {
    ++polishes;
    BfgsOptions bo;
    bo.tol = 1e-11;
    bo.max_iter = 100;
    bool nested_done = false;
    for (int round = 0; round < 25; ++round) {
      const double before = best_f;
      const RealVector start = best_nu;
      (void)bfgs_minimize([&](const RealVector& nu) { return evaluate(nu); },
                          box, best_nu, bo);
      for (Index axis = 0; axis < d; ++axis)
        line_refine(RealVector::Unit(d, axis));
      // composite step a la Powell: the accumulated round displacement
      // tracks curved valley floors that axis steps crawl along
      if (d > 1) line_refine(best_nu - start);
      if (before - best_f <= 0.01 * opts.gap_tol) {
        if (d == 2 && !nested_done) {
          nested_done = true;
          nested_refine(0);
          nested_refine(1);
          if (before - best_f > 0.01 * opts.gap_tol) continue;
        }
        break;
      }
      if (static_cast<int>(run.evals.size()) >= opts.max_evals + 12000) break;
    }
  };

  BranchAndBound bnb(box, opts.gamma, opts.lipschitz_cap);
  double lower = -kInf;
  bool polished_on_trigger = false;
  run.status = OptStatus::max_evals;

  while (static_cast<int>(run.evals.size()) < opts.max_evals) {
    RealVector next;
    if (d == 1) {
      const auto env = build_envelope_1d(supports, opts.gamma, opts.lipschitz_cap);
      const auto [x, val] = envelope_min_1d(env, box.lower(0), box.upper(0));
      next = RealVector::Constant(1, x);
      lower = val;
    } else {
      auto [pt, lb] = bnb.minimize(supports, 0.25 * opts.gap_tol, 4000);
      next = box.clamp(pt);
      lower = lb;
    }

    const double gap_scale =
        opts.relative_gap ? std::max(1.0, std::abs(best_f)) : 1.0;
    if (best_f - lower <= opts.gap_tol * gap_scale) {
      run.status = OptStatus::certified;
      break;
    }
    if (opts.polish && !polished_on_trigger &&
        best_f - lower <= opts.polish_trigger * gap_scale) {
      polished_on_trigger = true;
      polish_incumbent();
      continue;
    }
    bool repeated = false;
    for (const auto& e : run.evals) {
      if ((e.nu - next).lpNorm<Eigen::Infinity>() <=
          1e-13 * (1.0 + next.lpNorm<Eigen::Infinity>())) {
        repeated = true;
        break;
      }
    }
    if (repeated) {
      if (opts.polish && polishes < 3) {
        polish_incumbent();
        continue;
      }
      run.status = OptStatus::stalled;
      break;
    }
    evaluate(next);
  }

  // budget exhausted before the envelope localized the minimizer: refine
  // the incumbent so at least the returned point is locally converged
  if (opts.polish && run.status == OptStatus::max_evals && polishes < 3)
    polish_incumbent();

  run.minimizer = best_nu;
  run.value = best_f;
  run.certified_gap = std::max(best_f - lower, 0.0);
  return run;
}

namespace {

RealVector gradient_or_fd(const Evaluator& f, const RealVector& x,
                          const ObjectiveSample& sample) {
  if (sample.gradient) return *sample.gradient;
  RealVector g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double h = 1e-7 * std::max(1.0, std::abs(x(i)));
    RealVector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp).value - f(xm).value) / (2.0 * h);
  }
  return g;
}

}  // namespace

OptRun bfgs_minimize(const Evaluator& f, const Box& box,
                     const RealVector& start, const BfgsOptions& opts) {
  box.validate();
  if (!box.contains(start, 1e-12)) throw InputError("bfgs start outside box");
  const Index d = start.size();

  OptRun run;
  auto sample_at = [&](const RealVector& x) {
    const ObjectiveSample s = f(x);
    run.evals.push_back({x, s.value});
    return s;
  };

  RealVector x = box.clamp(start);
  ObjectiveSample s0 = sample_at(x);
  double fx = s0.value;
  RealVector gx = gradient_or_fd(f, x, s0);

  RealMatrix H = RealMatrix::Identity(d, d);
  run.status = OptStatus::max_evals;

  double best_f = fx;
  RealVector best_x = x;

  for (int it = 0; it < opts.max_iter; ++it) {
    RealVector p = -(H * gx);
    // drop components that push against an active bound
    for (Index i = 0; i < d; ++i) {
      if ((x(i) <= box.lower(i) && p(i) < 0.0) ||
          (x(i) >= box.upper(i) && p(i) > 0.0))
        p(i) = 0.0;
    }
    if (p.norm() < opts.tol) {
      run.status = OptStatus::small_direction;
      break;
    }
    double dphi0 = gx.dot(p);
    if (dphi0 > -1e-16 * std::max(1.0, std::abs(fx))) {
      H = RealMatrix::Identity(d, d);
      p = -gx;
      for (Index i = 0; i < d; ++i) {
        if ((x(i) <= box.lower(i) && p(i) < 0.0) ||
            (x(i) >= box.upper(i) && p(i) > 0.0))
          p(i) = 0.0;
      }
      dphi0 = gx.dot(p);
      if (p.norm() < opts.tol || dphi0 >= 0.0) {
        run.status = OptStatus::small_direction;
        break;
      }
    }

    // weak-Wolfe bisection line search on the box-projected ray
    double a = 0.0, b = kInf, t = 1.0;
    bool accepted = false;
    RealVector xt;
    double ft = fx;
    RealVector gt;
    for (int ls = 0; ls < 60; ++ls) {
      xt = box.clamp(x + t * p);
      const ObjectiveSample st = sample_at(xt);
      ft = st.value;
      if (ft > fx + opts.c1 * t * dphi0) {
        b = t;
      } else {
        gt = gradient_or_fd(f, xt, st);
        if (gt.dot(p) < opts.c2 * dphi0) {
          a = t;
        } else {
          accepted = true;
          break;
        }
      }
      t = std::isfinite(b) ? 0.5 * (a + b) : 2.0 * a;
      if (t <= 1e-20 || (std::isfinite(b) && b - a <= 1e-16 * std::max(1.0, a)))
        break;
    }
    if (!accepted) {
      run.status = OptStatus::line_search;
      break;
    }

    const RealVector s = xt - x;
    const RealVector y = gt - gx;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const RealMatrix I = RealMatrix::Identity(d, d);
      H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
          rho * s * s.transpose();
    }
    x = xt;
    fx = ft;
    gx = gt;
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  }

  if (fx < best_f) {
    best_f = fx;
    best_x = x;
  }
  run.minimizer = best_x;
  run.value = best_f;
  return run;
}

}  // namespace qpsa::optimize
