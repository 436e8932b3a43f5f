#include "qpsa/searches.hpp"

#include <algorithm>
#include <cmath>

#include "qpsa/kernels.hpp"

namespace qpsa::searches {

namespace {

constexpr Complex kImag(0.0, 1.0);

ComplexMatrix eval_blocks(const ComplexMatrix& M, const ComplexMatrix& C,
                          const ComplexMatrix& K, Complex z) {
  return (z * z) * M + z * C + K;
}

int trim_degree(const std::array<ComplexMatrix, 5>& coeff) {
  int d = 4;
  while (d > 0 && coeff[d].isZero(0.0)) --d;
  return d;
}

// Shared assembly of the four structured blocks; the vertical and
// horizontal pencils differ only in P, P' evaluation and the factors in
// front of the degree-1 blocks and M.
QuarticBlockPoly assemble_pencil(const ComplexMatrix& M,
                                 const ComplexMatrix& P0,
                                 const ComplexMatrix& P1, Complex tr_factor,
                                 Complex bl_factor, double m_sign,
                                 const Weights& w, double eps, double t) {
  const Index p = M.rows();
  const Index q = M.cols();
  const Index s = p + q;
  QuarticBlockPoly out;

  out.coeff[0] = ComplexMatrix::Zero(s, s);
  out.coeff[0].topLeftCorner(q, q) =
      -eps * std::pow(scaling_pw(w, t), 2) * ComplexMatrix::Identity(q, q);
  out.coeff[0].topRightCorner(q, p) = P0.adjoint();
  out.coeff[0].bottomLeftCorner(p, q) = P0;
  out.coeff[0].bottomRightCorner(p, p) = -eps * ComplexMatrix::Identity(p, p);

  out.coeff[1] = ComplexMatrix::Zero(s, s);
  out.coeff[1].topRightCorner(q, p) = tr_factor * P1.adjoint();
  out.coeff[1].bottomLeftCorner(p, q) = bl_factor * P1;

  out.coeff[2] = ComplexMatrix::Zero(s, s);
  out.coeff[2].topLeftCorner(q, q) =
      eps * (2.0 * w.wm * w.wm * t * t + w.wc * w.wc) *
      ComplexMatrix::Identity(q, q);
  out.coeff[2].topRightCorner(q, p) = m_sign * M.adjoint();
  out.coeff[2].bottomLeftCorner(p, q) = m_sign * M;

  out.coeff[3] = ComplexMatrix::Zero(s, s);

  out.coeff[4] = ComplexMatrix::Zero(s, s);
  out.coeff[4].topLeftCorner(q, q) =
      -eps * w.wm * w.wm * ComplexMatrix::Identity(q, q);

  out.effective_degree = trim_degree(out.coeff);
  return out;
}

// Schur complement of the -eps*I block: the finite eigenvalues of the
// structured pencil are the eigenvalues of the q x q quartic
// eps*a(lambda)*I + T(lambda)*B(lambda) with T, B the off-diagonal block
// polynomials. Much smaller to linearize when q << p + q.
QuarticBlockPoly deflate_pencil(const ComplexMatrix& M, const ComplexMatrix& P0,
                                const ComplexMatrix& P1, Complex tr_factor,
                                Complex bl_factor, double m_sign,
                                const Weights& w, double eps, double t) {
  const Index q = M.cols();
  const ComplexMatrix iq = ComplexMatrix::Identity(q, q);
  QuarticBlockPoly out;
  out.coeff[0] =
      -eps * eps * std::pow(scaling_pw(w, t), 2) * iq + P0.adjoint() * P0;
  out.coeff[1] =
      bl_factor * (P0.adjoint() * P1) + tr_factor * (P1.adjoint() * P0);
  out.coeff[2] = eps * eps * (2.0 * w.wm * w.wm * t * t + w.wc * w.wc) * iq +
                 m_sign * (P0.adjoint() * M + M.adjoint() * P0) +
                 tr_factor * bl_factor * (P1.adjoint() * P1);
  out.coeff[3] = m_sign * (tr_factor * (P1.adjoint() * M) +
                           bl_factor * (M.adjoint() * P1));
  out.coeff[4] = -eps * eps * w.wm * w.wm * iq + M.adjoint() * M;
  out.effective_degree = trim_degree(out.coeff);
  return out;
}

std::vector<double> imaginary_parts_of_imaginary_eigenvalues(
    const QuarticBlockPoly& q, const SearchTolerances& tol) {
  std::vector<double> out;
  if (q.effective_degree < 1) return out;
  const auto eig = kernels::generalized_eigenvalues(linearize_block_poly(q));
  for (const Complex& lam : eig.finite) {
    if (std::abs(lam.real()) <= tol.tau_imag * (1.0 + std::abs(lam)))
      out.push_back(lam.imag());
  }
  return out;
}

std::vector<double> dedup_sorted(std::vector<double> vals, double tau_merge) {
  std::sort(vals.begin(), vals.end());
  std::vector<double> out;
  for (double v : vals) {
    if (out.empty() || v - out.back() > tau_merge * (1.0 + std::abs(v)))
      out.push_back(v);
  }
  return out;
}

// candidate crossing ordinates for either search direction, solving the
// smaller of the structured and deflated pencils unless a form is forced
std::vector<double> pencil_candidates(const ComplexMatrix& M,
                                      const ComplexMatrix& C,
                                      const ComplexMatrix& K, const Weights& w,
                                      double eps, double t, bool vertical,
                                      const SearchTolerances& tol) {
  ComplexMatrix p0, p1;
  Complex tr, bl;
  double ms = 0.0;
  if (vertical) {
    p0 = eval_blocks(M, C, K, Complex(t, 0.0));
    p1 = 2.0 * t * M + C;
    tr = Complex(-1.0, 0.0);
    bl = Complex(1.0, 0.0);
    ms = 1.0;
  } else {
    p0 = eval_blocks(M, C, K, Complex(0.0, t));
    p1 = (2.0 * Complex(0.0, t)) * M + C;
    tr = -kImag;
    bl = -kImag;
    ms = -1.0;
  }

  PencilForm form = tol.pencil;
  if (form == PencilForm::automatic) {
    const Index p = M.rows();
    const Index q = M.cols();
    const bool m_zero = M.isZero(0.0);
    const int ds = (w.wm != 0.0) ? 4
                   : ((2.0 * w.wm * w.wm * t * t + w.wc * w.wc) != 0.0 ||
                      !m_zero)
                       ? 2
                       : 1;
    const int dg = (!m_zero || w.wm != 0.0) ? 4 : 2;
    form = (q * dg < (p + q) * ds) ? PencilForm::deflated
                                   : PencilForm::structured;
  }

  const QuarticBlockPoly pencil =
      form == PencilForm::deflated
          ? deflate_pencil(M, p0, p1, tr, bl, ms, w, eps, t)
          : assemble_pencil(M, p0, p1, tr, bl, ms, w, eps, t);
  return imaginary_parts_of_imaginary_eigenvalues(pencil, tol);
}

}  // namespace

QuarticBlockPoly build_vertical_pencil(const ComplexMatrix& M,
                                       const ComplexMatrix& C,
                                       const ComplexMatrix& K,
                                       const Weights& w, double eps,
                                       double x) {
  const ComplexMatrix px = eval_blocks(M, C, K, Complex(x, 0.0));
  const ComplexMatrix dpx = 2.0 * x * M + C;
  return assemble_pencil(M, px, dpx, Complex(-1.0, 0.0), Complex(1.0, 0.0),
                         1.0, w, eps, x);
}

QuarticBlockPoly build_horizontal_pencil(const ComplexMatrix& M,
                                         const ComplexMatrix& C,
                                         const ComplexMatrix& K,
                                         const Weights& w, double eps,
                                         double y) {
  const ComplexMatrix piy = eval_blocks(M, C, K, Complex(0.0, y));
  const ComplexMatrix dpiy = (2.0 * Complex(0.0, y)) * M + C;
  return assemble_pencil(M, piy, dpiy, -kImag, -kImag, -1.0, w, eps, y);
}

QuarticBlockPoly build_vertical_pencil(const QuadPoly& p, const Weights& w,
                                       double eps, double x) {
  return build_vertical_pencil(p.M, p.C, p.K, w, eps, x);
}

QuarticBlockPoly build_horizontal_pencil(const QuadPoly& p, const Weights& w,
                                         double eps, double y) {
  return build_horizontal_pencil(p.M, p.C, p.K, w, eps, y);
}

Pencil linearize_block_poly(const QuarticBlockPoly& q) {
  const int d = q.effective_degree;
  if (d < 1) throw InputError("cannot linearize a degree-0 block polynomial");
  const Index s = q.block_size();
  const Index total = s * d;
  Pencil out;
  out.X = ComplexMatrix::Zero(total, total);
  out.Y = ComplexMatrix::Zero(total, total);
  for (int i = 0; i + 1 < d; ++i) {
    out.X.block(i * s, (i + 1) * s, s, s) = ComplexMatrix::Identity(s, s);
    out.Y.block(i * s, i * s, s, s) = ComplexMatrix::Identity(s, s);
  }
  for (int j = 0; j < d; ++j)
    out.X.block((d - 1) * s, j * s, s, s) = -q.coeff[j];
  out.Y.block((d - 1) * s, (d - 1) * s, s, s) = q.coeff[d];
  return out;
}

double membership_residual(const ComplexMatrix& M, const ComplexMatrix& C,
                           const ComplexMatrix& K, const Weights& w,
                           double eps, Complex z) {
  const double smin =
      kernels::two_smallest_singular_values(eval_blocks(M, C, K, z)).first;
  return smin / scaling_pw(w, std::abs(z)) - eps;
}

std::vector<Crossing> vertical_search(const ComplexMatrix& M,
                                      const ComplexMatrix& C,
                                      const ComplexMatrix& K, const Weights& w,
                                      double eps, double x,
                                      const SearchTolerances& tol) {
  std::vector<double> cand = pencil_candidates(M, C, K, w, eps, x, true, tol);

  const bool mirror = is_real(M) && is_real(C) && is_real(K);
  if (mirror) {
    // real coefficients: keep y >= 0 and mirror for exact symmetry
    std::vector<double> half;
    for (double y : cand) half.push_back(std::abs(y));
    half = dedup_sorted(std::move(half), tol.tau_merge);
    cand.clear();
    for (auto it = half.rbegin(); it != half.rend(); ++it)
      if (*it > 0.0) cand.push_back(-*it);
    for (double y : half) cand.push_back(y);
  } else {
    cand = dedup_sorted(std::move(cand), tol.tau_merge);
  }

  std::vector<Crossing> out;
  for (double y : cand) {
    const double res =
        std::abs(membership_residual(M, C, K, w, eps, Complex(x, y))) / eps;
    if (res <= tol.tau_ver) out.push_back({y, res});
  }
  return out;
}

std::vector<Crossing> vertical_search(const QuadPoly& p, const Weights& w,
                                      double eps, double x,
                                      const SearchTolerances& tol) {
  return vertical_search(p.M, p.C, p.K, w, eps, x, tol);
}

CrossSection assemble_cross_section(const std::vector<Crossing>& crossings,
                                    const ComplexMatrix& M,
                                    const ComplexMatrix& C,
                                    const ComplexMatrix& K, const Weights& w,
                                    double eps, double x,
                                    const SearchTolerances& tol) {
  CrossSection out;
  const std::size_t m = crossings.size();
  if (m == 0) return out;

  // classify the gap between consecutive crossings by midpoint membership
  std::vector<bool> inside(m > 1 ? m - 1 : 0, false);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double mid = 0.5 * (crossings[i].ordinate + crossings[i + 1].ordinate);
    inside[i] =
        membership_residual(M, C, K, w, eps, Complex(x, mid)) <= tol.tau_mem;
  }

  std::vector<bool> used(m, false);
  std::size_t i = 0;
  while (i + 1 < m) {
    if (inside[i]) {
      std::size_t j = i;
      while (j + 1 < m && inside[j]) ++j;
      out.intervals.emplace_back(crossings[i].ordinate, crossings[j].ordinate);
      for (std::size_t k = i; k <= j; ++k) used[k] = true;
      i = j;
    } else {
      ++i;
    }
  }
  // tangential crossings keep a degenerate interval so horizontal
  // refinement still probes them
  for (std::size_t k = 0; k < m; ++k) {
    if (!used[k])
      out.intervals.emplace_back(crossings[k].ordinate, crossings[k].ordinate);
  }
  std::sort(out.intervals.begin(), out.intervals.end());
  return out;
}

CrossSection assemble_cross_section(const std::vector<Crossing>& crossings,
                                    const QuadPoly& p, const Weights& w,
                                    double eps, double x,
                                    const SearchTolerances& tol) {
  return assemble_cross_section(crossings, p.M, p.C, p.K, w, eps, x, tol);
}

std::optional<double> horizontal_search(const ComplexMatrix& M,
                                        const ComplexMatrix& C,
                                        const ComplexMatrix& K,
                                        const Weights& w, double eps, double y,
                                        const SearchTolerances& tol) {
  std::vector<double> cand = pencil_candidates(M, C, K, w, eps, y, false, tol);
  std::sort(cand.begin(), cand.end(), std::greater<double>());
  for (double x : cand) {
    const double res =
        std::abs(membership_residual(M, C, K, w, eps, Complex(x, y))) / eps;
    if (res <= tol.tau_ver) return x;
  }
  return std::nullopt;
}

std::optional<double> horizontal_search(const QuadPoly& p, const Weights& w,
                                        double eps, double y,
                                        const SearchTolerances& tol) {
  return horizontal_search(p.M, p.C, p.K, w, eps, y, tol);
}

}  // namespace qpsa::searches
