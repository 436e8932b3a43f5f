#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "qpsa/kernels.hpp"

namespace oracle {

ComplexMatrix random_complex(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = Complex(dist(rng), dist(rng));
  return a;
}

ComplexMatrix random_real(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = dist(rng);
  return a;
}

ComplexMatrix random_orthonormal(Rng& rng, Index rows, Index cols) {
  const auto [q, r] = qpsa::kernels::thin_qr(random_complex(rng, rows, cols));
  return q;
}

QuadPoly random_quad_poly(Rng& rng, Index n, bool real_coeffs) {
  auto draw = [&](double scale) {
    ComplexMatrix a = real_coeffs ? random_real(rng, n, n)
                                  : random_complex(rng, n, n);
    return (scale * a).eval();
  };
  QuadPoly p;
  const ComplexMatrix m0 = ComplexMatrix::Identity(n, n) + draw(0.2);
  // the pseudospectrum is bounded only while eps * wm < sigma_min(M); floor
  // the mass coefficient's singular values so test problems satisfy the
  // boundedness assumption with margin for eps <= 0.2
  if (real_coeffs) {
    Eigen::JacobiSVD<RealMatrix> svd(
        m0.real(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd sv = svd.singularValues();
    for (Index i = 0; i < n; ++i) sv(i) = std::max(sv(i), 0.5);
    p.M = (svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose())
              .cast<Complex>();
  } else {
    Eigen::JacobiSVD<ComplexMatrix> svd(
        m0, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd sv = svd.singularValues();
    for (Index i = 0; i < n; ++i) sv(i) = std::max(sv(i), 0.5);
    p.M = svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
  }
  p.C = draw(1.0);
  p.K = draw(1.0);
  return p;
}

double sigma_min_small(const ComplexMatrix& a) {
  if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
  if (a.rows() == 2 && a.cols() == 2) {
    const double f2 = a.squaredNorm();
    const double det = std::abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
    const double disc = std::max(f2 * f2 - 4.0 * det * det, 0.0);
    return std::sqrt(std::max(0.5 * (f2 - std::sqrt(disc)), 0.0));
  }
  throw std::logic_error("sigma_min_small supports only n <= 2");
}

double sigma_min_poly_small(const QuadPoly& p, Complex z) {
  return sigma_min_small(((z * z) * p.M + z * p.C + p.K).eval());
}

namespace {

double residual_small(const QuadPoly& p, const Weights& w, double eps,
                      Complex z) {
  return sigma_min_poly_small(p, z) - eps * qpsa::scaling_pw(w, std::abs(z));
}

// rightmost sign change of f on [lo, hi] refined by bisection; requires
// f(lo) and f(hi) known
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double flo, int iters = 100) {
  double fl = flo;
  (void)fl;
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm <= 0.0) == (flo <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GridPsa grid_psa_small(const QuadPoly& p, const Weights& w, double eps,
                       double re_lo, double re_hi, double im_lo, double im_hi,
                       int grid_n) {
  const double dx = (re_hi - re_lo) / (grid_n - 1);
  const double dy = (im_hi - im_lo) / (grid_n - 1);
  double best_x = -std::numeric_limits<double>::infinity();
  double best_y = 0.0;
  for (int iy = 0; iy < grid_n; ++iy) {
    const double y = im_lo + iy * dy;
    // scan each row from the right; the first inside point is the row max
    for (int ix = grid_n - 1; ix >= 0; --ix) {
      const double x = re_lo + ix * dx;
      if (x <= best_x) break;
      if (residual_small(p, w, eps, Complex(x, y)) <= 0.0) {
        if (x > best_x) {
          best_x = x;
          best_y = y;
        }
        break;
      }
    }
  }
  if (!std::isfinite(best_x))
    throw std::runtime_error("grid oracle: no member found in the box");

  // refine: for a band of rows around the winner, push the boundary right
  // by bisection in x, then take the best over the band
  GridPsa out{best_x, Complex(best_x, best_y)};
  auto rightmost_x_at = [&](double y) {
    auto f = [&](double x) { return residual_small(p, w, eps, Complex(x, y)); };
    double lo = best_x - 2.0 * dx;
    if (f(lo) > 0.0) return -std::numeric_limits<double>::infinity();
    double hi = lo + dx;
    while (f(hi) <= 0.0 && hi < re_hi + 1.0) hi += dx;
    return bisect(f, lo, hi, f(lo));
  };
  const int band = 40;
  const double y0 = best_y - band * dy;
  const double y1 = best_y + band * dy;
  const int fine = 8 * band + 1;
  const double fine_step = (y1 - y0) / (fine - 1);
  for (int k = 0; k < fine; ++k) {
    const double y = y0 + k * fine_step;
    const double xr = rightmost_x_at(y);
    if (xr > out.abscissa) {
      out.abscissa = xr;
      out.rightmost = Complex(xr, y);
    }
  }
  // final 1-D maximization of the boundary over y around the band winner;
  // removes the quadratic y-resolution error of the row scan
  {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = out.rightmost.imag() - 2.0 * fine_step;
    double hi = out.rightmost.imag() + 2.0 * fine_step;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = -rightmost_x_at(x1), f2 = -rightmost_x_at(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = -rightmost_x_at(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = -rightmost_x_at(x2);
      }
    }
    const double y_ref = 0.5 * (lo + hi);
    const double xr = rightmost_x_at(y_ref);
    if (xr > out.abscissa) {
      out.abscissa = xr;
      out.rightmost = Complex(xr, y_ref);
    }
  }
  return out;
}

std::vector<double> scalar_vertical_roots(const QuadPoly& p, const Weights& w,
                                          double eps, double x, double y_lo,
                                          double y_hi, int samples) {
  std::vector<double> roots;
  auto f = [&](double y) { return residual_small(p, w, eps, Complex(x, y)); };
  double prev_y = y_lo;
  double prev_f = f(y_lo);
  for (int i = 1; i < samples; ++i) {
    const double y = y_lo + (y_hi - y_lo) * i / (samples - 1);
    const double fy = f(y);
    if ((prev_f <= 0.0) != (fy <= 0.0))
      roots.push_back(bisect(f, prev_y, y, prev_f));
    prev_y = y;
    prev_f = fy;
  }
  return roots;
}

std::vector<double> scalar_horizontal_roots(const QuadPoly& p,
                                            const Weights& w, double eps,
                                            double y, double x_lo, double x_hi,
                                            int samples) {
  std::vector<double> roots;
  auto f = [&](double x) { return residual_small(p, w, eps, Complex(x, y)); };
  double prev_x = x_lo;
  double prev_f = f(x_lo);
  for (int i = 1; i < samples; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / (samples - 1);
    const double fx = f(x);
    if ((prev_f <= 0.0) != (fx <= 0.0))
      roots.push_back(bisect(f, prev_x, x, prev_f));
    prev_x = x;
    prev_f = fx;
  }
  return roots;
}

RealVector fd_gradient(const std::function<double(const RealVector&)>& f,
                       const RealVector& nu, double h) {
  RealVector g(nu.size());
  for (Index i = 0; i < nu.size(); ++i) {
    RealVector p = nu, m = nu;
    p(i) += h;
    m(i) -= h;
    g(i) = (f(p) - f(m)) / (2.0 * h);
  }
  return g;
}

void psa_bounding_box(const QuadPoly& p, double margin, double* re_lo,
                      double* re_hi, double* im_lo, double* im_hi) {
  const auto eigs = qpsa::polynomial_eigenvalues(p);
  double rlo = 0.0, rhi = 0.0, ilo = 0.0, ihi = 0.0;
  bool first = true;
  for (const Complex& z : eigs) {
    if (first) {
      rlo = rhi = z.real();
      ilo = ihi = z.imag();
      first = false;
    }
    rlo = std::min(rlo, z.real());
    rhi = std::max(rhi, z.real());
    ilo = std::min(ilo, z.imag());
    ihi = std::max(ihi, z.imag());
  }
  const double spread = std::max({rhi - rlo, ihi - ilo, 1.0});
  *re_lo = rlo - margin * spread;
  *re_hi = rhi + margin * spread;
  *im_lo = ilo - margin * spread;
  *im_hi = ihi + margin * spread;
}

}  // namespace oracle
