#include "qpsa/damping.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "qpsa/kernels.hpp"
#include "qpsa/searches.hpp"

namespace qpsa::damping {

MsdDamper damper_at_mass(Index n, Index mass, Index param) {
  if (mass < 0 || mass >= n) throw InputError("damper position out of range");
  MsdDamper d;
  d.matrix = ComplexMatrix::Zero(n, n);
  d.matrix(mass, mass) = 1.0;
  d.param = param;
  return d;
}

MsdDamper damper_between_masses(
    Index n, const std::vector<std::pair<Index, Index>>& rows, Index param) {
  RealMatrix r = RealMatrix::Zero(static_cast<Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto [a, b] = rows[i];
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw InputError("damper row index out of range");
    r(static_cast<Index>(i), a) = 1.0;
    r(static_cast<Index>(i), b) = -1.0;
  }
  MsdDamper d;
  d.matrix = (r.transpose() * r).cast<Complex>();
  d.param = param;
  return d;
}

ComplexMatrix internal_damping(const ComplexMatrix& M, const ComplexMatrix& K,
                               double xi) {
  const ComplexMatrix m_half = kernels::hermitian_sqrt(M);
  // diagonal masses in all shipped models, but solve generally
  const ComplexMatrix m_half_inv =
      m_half.partialPivLu().solve(ComplexMatrix::Identity(M.rows(), M.cols()));
  const ComplexMatrix inner =
      kernels::hermitian_sqrt(m_half_inv * K * m_half_inv.adjoint());
  ComplexMatrix c = 2.0 * xi * m_half * inner * m_half;
  return 0.5 * (c + c.adjoint());
}

namespace {

ComplexMatrix tridiag(Index n, double off, double diag) {
  ComplexMatrix k = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    k(i, i) = diag;
    if (i + 1 < n) {
      k(i, i + 1) = off;
      k(i + 1, i) = off;
    }
  }
  return k;
}

void require_spd(const ComplexMatrix& a, const char* what) {
  Eigen::LLT<ComplexMatrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw NumericalError(std::string(what) + " is not positive definite");
}

}  // namespace

ParamQuadratic msd_family(const MsdSpec& spec) {
  if (spec.n < 1) throw InputError("msd model size must be >= 1");
  if (spec.masses.size() != spec.n) throw InputError("masses length mismatch");
  if (spec.masses.minCoeff() <= 0.0) throw InputError("masses must be positive");

  ComplexMatrix m = ComplexMatrix::Zero(spec.n, spec.n);
  for (Index i = 0; i < spec.n; ++i) m(i, i) = spec.masses(i);
  const ComplexMatrix k0 = tridiag(spec.n, spec.spring_off, spec.spring_diag);
  require_spd(k0, "stiffness matrix");
  const ComplexMatrix c_int = internal_damping(m, k0, spec.xi);

  ParamQuadratic fam;
  fam.size = spec.n;
  fam.dim = spec.dim;
  fam.mass_terms.push_back({CoeffFn::constant(1.0, spec.dim), m});

  if (spec.spring_scale_param) {
    const Index j = *spec.spring_scale_param;
    fam.stiffness_terms.push_back({CoeffFn::affine(0.0, 1.0, j, spec.dim), k0});
    // K(nu_j) = nu_j K0 makes C_int(nu_j) = sqrt(nu_j) C_int(1), so the
    // internal damping enters as a sqrt-coefficient term
    fam.damping_terms.push_back({CoeffFn::sqrt_of(j, spec.dim), c_int});
  } else {
    fam.stiffness_terms.push_back({CoeffFn::constant(1.0, spec.dim), k0});
    fam.damping_terms.push_back({CoeffFn::constant(1.0, spec.dim), c_int});
  }
  for (const auto& d : spec.dampers) {
    if (d.param < 0 || d.param >= spec.dim)
      throw InputError("damper parameter binding out of range");
    fam.damping_terms.push_back(
        {CoeffFn::affine(0.0, 1.0, d.param, spec.dim), d.matrix});
  }
  fam.validate();
  return fam;
}

ExampleProblem build_example(ExampleName name, Index n, bool unit_weights) {
  ExampleProblem out;
  out.weights = {1.0, 1.0, 1.0};
  out.epsilon = 0.05;

  auto masses_1_to = [](Index count) {
    RealVector m(count);
    for (Index i = 0; i < count; ++i) m(i) = static_cast<double>(i + 1);
    return m;
  };
  auto box1 = [](double lo, double hi) {
    Box b;
    b.lower = RealVector::Constant(1, lo);
    b.upper = RealVector::Constant(1, hi);
    return b;
  };
  auto box2 = [](double l1, double u1, double l2, double u2) {
    Box b;
    b.lower = RealVector(2);
    b.upper = RealVector(2);
    b.lower << l1, l2;
    b.upper << u1, u2;
    return b;
  };

  MsdSpec spec;
  switch (name) {
    case ExampleName::ex5_1:
      spec.n = 4;
      spec.masses = masses_1_to(4);
      spec.spring_off = -5.0;
      spec.spring_diag = 10.0;
      spec.xi = 0.005;
      spec.dim = 1;
      spec.dampers.push_back(damper_at_mass(spec.n, 1, 0));
      out.box = box1(0.0, 100.0);
      out.label = "ex5_1";
      break;
    case ExampleName::ex5_2:
    case ExampleName::ex6_2:
      spec.n = 20;
      spec.masses = masses_1_to(20);
      spec.spring_off = -25.0;
      spec.spring_diag = 50.0;
      spec.xi = 0.005;
      spec.dim = 1;
      spec.dampers.push_back(damper_at_mass(spec.n, 1, 0));
      out.box = box1(0.0, 100.0);
      if (name == ExampleName::ex6_2) {
        out.weights = {0.0, 1.0, 1.0};
        out.label = "ex6_2";
      } else {
        out.label = "ex5_2";
      }
      break;
    case ExampleName::ex5_3: {
      if (n != 80 && n != 200 && n != 400 && n != 1200 && n != 1400)
        throw InputError("ex5_3 supports n in {80, 200, 400, 1200, 1400}");
      spec.n = n;
      spec.masses = masses_1_to(n);
      spec.spring_off = -400.0;
      spec.spring_diag = 800.0;
      spec.xi = 0.005;
      spec.dim = 1;
      spec.dampers.push_back(
          damper_between_masses(n, {{1, 2}, {3, 4}}, 0));
      out.box = box1(0.0, 250.0);
      out.epsilon = 0.03;
      if (!unit_weights) out.weights = {0.7, 1.0, 0.0};
      out.label = unit_weights ? "ex5_3 (1,1,1)" : "ex5_3 (0.7,1,0)";
      break;
    }
    case ExampleName::ex5_4a:
      spec.n = 20;
      spec.masses = masses_1_to(20);
      spec.spring_off = -25.0;
      spec.spring_diag = 50.0;
      spec.xi = 0.005;
      spec.dim = 2;
      spec.dampers.push_back(damper_at_mass(spec.n, 1, 0));
      spec.dampers.push_back(damper_at_mass(spec.n, 18, 1));
      out.box = box2(0.0, 50.0, 0.0, 100.0);
      out.label = "ex5_4a";
      break;
    case ExampleName::ex5_4b:
      spec.n = 20;
      spec.masses = masses_1_to(20);
      spec.spring_off = -1.0;
      spec.spring_diag = 2.0;
      spec.xi = 0.005;
      spec.dim = 2;
      spec.dampers.push_back(damper_at_mass(spec.n, 1, 0));
      spec.spring_scale_param = 1;
      out.box = box2(0.0, 100.0, 20.0, 80.0);
      out.label = "ex5_4b";
      break;
  }
  out.family = msd_family(spec);
  return out;
}

std::optional<ExampleName> example_from_string(const std::string& s) {
  if (s == "ex5_1") return ExampleName::ex5_1;
  if (s == "ex5_2") return ExampleName::ex5_2;
  if (s == "ex5_3") return ExampleName::ex5_3;
  if (s == "ex5_4a") return ExampleName::ex5_4a;
  if (s == "ex5_4b") return ExampleName::ex5_4b;
  if (s == "ex6_2") return ExampleName::ex6_2;
  return std::nullopt;
}

Linearization companion_matrix(const QuadPoly& p) {
  p.validate();
  const Index n = p.size();
  Linearization out;
  out.minv_norm = kernels::operator_norm_inverse(p.M);
  Eigen::PartialPivLU<ComplexMatrix> lu(p.M);
  out.A = ComplexMatrix::Zero(2 * n, 2 * n);
  out.A.topLeftCorner(n, n) = -lu.solve(p.C);
  out.A.topRightCorner(n, n) = -lu.solve(p.K);
  out.A.bottomLeftCorner(n, n) = ComplexMatrix::Identity(n, n);
  return out;
}

PsaOutcome matrix_psa(const ComplexMatrix& A, double eps,
                      const CrissCrossOptions& opts) {
  if (A.rows() != A.cols()) throw InputError("matrix_psa: A must be square");
  QuadPoly p;
  p.M = ComplexMatrix::Zero(A.rows(), A.cols());
  p.C = -ComplexMatrix::Identity(A.rows(), A.cols());
  p.K = A;
  return criss_cross(p, {0.0, 0.0, 1.0}, eps, opts);
}

ParamQuadratic linearization_family(const ParamQuadratic& family) {
  family.validate();
  if (family.mass_terms.size() != 1)
    throw InputError("linearization_family needs a single constant mass term");
  const auto& mterm = family.mass_terms.front();
  // reject parameter-dependent mass coefficients by probing the gradient
  RealVector probe = RealVector::Constant(family.dim, 1.0);
  if (mterm.fn.grad(probe).cwiseAbs().maxCoeff() != 0.0)
    throw InputError("linearization_family needs a parameter-independent mass");
  const double mscale = mterm.fn.eval(probe);
  const ComplexMatrix m = mscale * mterm.matrix;
  const Index n = family.size;

  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  ParamQuadratic lin;
  lin.size = 2 * n;
  lin.dim = family.dim;
  lin.damping_terms.push_back(
      {CoeffFn::constant(1.0, family.dim),
       (-ComplexMatrix::Identity(2 * n, 2 * n)).eval()});

  ComplexMatrix lower = ComplexMatrix::Zero(2 * n, 2 * n);
  lower.bottomLeftCorner(n, n) = ComplexMatrix::Identity(n, n);
  lin.stiffness_terms.push_back({CoeffFn::constant(1.0, family.dim), lower});
  for (const auto& t : family.damping_terms) {
    ComplexMatrix blk = ComplexMatrix::Zero(2 * n, 2 * n);
    blk.topLeftCorner(n, n) = -lu.solve(t.matrix);
    lin.stiffness_terms.push_back({t.fn, blk});
  }
  for (const auto& t : family.stiffness_terms) {
    ComplexMatrix blk = ComplexMatrix::Zero(2 * n, 2 * n);
    blk.topRightCorner(n, n) = -lu.solve(t.matrix);
    lin.stiffness_terms.push_back({t.fn, blk});
  }
  return lin;
}

ContainmentReport containment_probe(const ParamQuadratic& family,
                                    const RealVector& nu, double eps,
                                    Index target_samples, const Weights& w) {
  const QuadPoly p = instantiate(family, nu);
  const Linearization lin = companion_matrix(p);
  const double eps_bar = eps * lin.minv_norm;

  ContainmentReport report;
  auto check = [&](Complex z) {
    const ComplexMatrix shifted =
        lin.A - z * ComplexMatrix::Identity(lin.A.rows(), lin.A.cols());
    const double smin = kernels::two_smallest_singular_values(shifted).first;
    ++report.samples;
    const double excess = smin - eps_bar;
    report.max_excess = std::max(report.max_excess, excess);
    if (excess > 1e-10) ++report.violations;
  };

  // eigenvalues are members (sigma_min = 0)
  const auto eigs = polynomial_eigenvalues(p);
  for (const Complex& z : eigs) {
    if (report.samples >= target_samples) break;
    check(z);
  }

  // sweep vertical lines; crossings are boundary members, interior points
  // of the cross-section intervals fill the rest
  const auto psa = criss_cross(p, w, eps);
  double lo = psa.abscissa;
  for (const Complex& z : eigs) lo = std::min(lo, z.real());
  lo -= 0.1 * (std::abs(lo) + 1.0);
  const double hi = psa.abscissa;

  Index lines = 32;
  while (report.samples < target_samples && lines <= 4096) {
    for (Index i = 0; i < lines && report.samples < target_samples; ++i) {
      const double x = lo + (hi - lo) * (2.0 * i + 1.0) / (2.0 * lines);
      const auto crossings = searches::vertical_search(p, w, eps, x);
      for (const auto& c : crossings) {
        if (report.samples >= target_samples) break;
        check(Complex(x, c.ordinate));
      }
      const auto section =
          searches::assemble_cross_section(crossings, p, w, eps, x);
      for (const auto& [yl, yr] : section.intervals) {
        for (int q = 1; q <= 5 && report.samples < target_samples; ++q)
          check(Complex(x, yl + (yr - yl) * q / 6.0));
      }
    }
    lines *= 2;
  }
  return report;
}

}  // namespace qpsa::damping
