#include "qpsa/crisscross.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qpsa/kernels.hpp"

namespace qpsa {

void CrissCrossOptions::validate() const {
  if (rel_tol <= 0.0) throw InputError("rel_tol must be positive");
  if (max_iter < 1) throw InputError("max_iter must be >= 1");
}

namespace detail {

PsaOutcome criss_cross_blocks(const ComplexMatrix& M, const ComplexMatrix& C,
                              const ComplexMatrix& K, const Weights& w,
                              double eps, Complex z0,
                              const CrissCrossOptions& opts) {
  opts.validate();
  w.validate();
  if (eps <= 0.0) throw InputError("eps must be positive");

  const bool mirror = is_real(M) && is_real(C) && is_real(K);

  PsaOutcome out;
  Complex z_best = z0;
  double x_prev = z0.real();
  out.iterates.push_back({x_prev, z0});
  out.status = PsaStatus::max_iter;

  for (int k = 1; k <= opts.max_iter; ++k) {
    const auto crossings =
        searches::vertical_search(M, C, K, w, eps, x_prev, opts.search);
    const auto section = searches::assemble_cross_section(
        crossings, M, C, K, w, eps, x_prev, opts.search);
    if (section.empty()) {
      out.status = PsaStatus::stalled_vertical;
      break;
    }

    std::vector<double> midpoints;
    for (const auto& [yl, yr] : section.intervals)
      midpoints.push_back(0.5 * (yl + yr));
    if (mirror) {
      // symmetric cross-sections: one horizontal search per |y| suffices
      for (double& y : midpoints) y = std::abs(y);
      std::sort(midpoints.begin(), midpoints.end());
      midpoints.erase(std::unique(midpoints.begin(), midpoints.end(),
                                  [&](double a, double b) {
                                    return b - a <= opts.search.tau_merge *
                                                        (1.0 + std::abs(b));
                                  }),
                      midpoints.end());
    }

    double x_new = -std::numeric_limits<double>::infinity();
    double y_new = 0.0;
    std::vector<Complex> sweep;
    for (double ymid : midpoints) {
      const auto hx =
          searches::horizontal_search(M, C, K, w, eps, ymid, opts.search);
      if (!hx) continue;
      sweep.emplace_back(*hx, ymid);
      if (*hx > x_new) {
        x_new = *hx;
        y_new = ymid;
      }
    }
    if (sweep.empty()) {
      // midpoints are members yet no verified rightmost intersection was
      // found; accept the current estimate as in the empty-scan case
      out.status = PsaStatus::stalled_vertical;
      break;
    }
    out.final_sweep = std::move(sweep);

    // the previous point remains a member, so the estimate never decreases
    if (x_new >= x_prev) z_best = Complex(x_new, y_new);
    const double x_rec = std::max(x_new, x_prev);
    out.iterates.push_back({x_rec, z_best});

    if (x_new - x_prev <= opts.rel_tol * std::max(1.0, std::abs(x_new))) {
      out.status = PsaStatus::converged;
      break;
    }
    x_prev = x_rec;
  }

  out.rightmost = z_best;
  out.abscissa = z_best.real();
  return out;
}

}  // namespace detail

PsaOutcome criss_cross(const QuadPoly& p, const Weights& w, double eps,
                       const CrissCrossOptions& opts) {
  p.validate();
  const Complex z0 =
      opts.initial_point ? *opts.initial_point : rightmost_eigenvalue(p);
  PsaOutcome out = detail::criss_cross_blocks(p.M, p.C, p.K, w, eps, z0, opts);
  out.rightmost_triplet =
      kernels::smallest_singular_triplet(eval_poly(p, out.rightmost));
  return out;
}

}  // namespace qpsa
