#include <cmath>

#include "acceptance.hpp"
#include "qpsa/crisscross.hpp"
#include "qpsa/damping.hpp"
#include "qpsa/minimize.hpp"
#include "qpsa/objective.hpp"
#include "qpsa/optimize.hpp"
#include "qpsa/subspace.hpp"

using namespace qpsa;

namespace {

// curvature lower bound calibrated for the damping families (measured
// second differences stay above -1; see the optimizer notes)
constexpr double kDampingGamma = -4.0;

MinimizeSfOptions damping_options() {
  MinimizeSfOptions opts;
  opts.global.gamma = kDampingGamma;
  return opts;
}

}  // namespace

void criterion1(Acceptance& a) {
  const auto ex = damping::build_example(damping::ExampleName::ex5_1);
  const QuadPoly p0 = instantiate(ex.family, RealVector::Zero(1));
  a.value("alpha_eps(P(.;0))",
          criss_cross(p0, ex.weights, ex.epsilon).abscissa, 0.0619, 5e-4);
  a.value("alpha(P(.;0))", rightmost_eigenvalue(p0).real(), -0.0043, 5e-4);

  ObjectiveOptions oo;
  auto f = [&](const RealVector& nu) -> optimize::ObjectiveSample {
    const auto e = eval_full(ex.family, nu, ex.weights, ex.epsilon, oo);
    if (e.gradient_valid) return {e.value, e.gradient};
    return {e.value, std::nullopt};
  };
  optimize::GlobalOptOptions go;  // spec default gamma = -100
  const auto run = optimize::global_minimize(f, ex.box, go);
  a.value("nu*", run.minimizer(0), 4.6679, 5e-3);
  a.value("alpha_eps(nu*)", run.value, -0.0888, 5e-4);
  const QuadPoly ps = instantiate(ex.family, run.minimizer);
  a.value("alpha(P(.;nu*))", rightmost_eigenvalue(ps).real(), -0.1347, 5e-4);
}

void criterion2(Acceptance& a) {
  const auto ex = damping::build_example(damping::ExampleName::ex5_2);
  const auto out =
      minimize_psa(ex.family, ex.box, ex.weights, ex.epsilon, damping_options());
  a.value("nu*", out.minimizer(0), 42.1076, 5e-3);
  a.value("alpha_eps(nu*)", out.value, 0.0020, 5e-4);

  const QuadPoly p0 = instantiate(ex.family, RealVector::Zero(1));
  a.value("alpha_eps(P(.;0))",
          criss_cross(p0, ex.weights, ex.epsilon).abscissa, 0.1324, 5e-4);
  a.value("alpha(P(.;0))", rightmost_eigenvalue(p0).real(), -0.0011, 5e-4);
  const QuadPoly ps = instantiate(ex.family, out.minimizer);
  a.value("alpha(P(.;nu*))", rightmost_eigenvalue(ps).real(), -0.0079, 5e-4);

  // outer iterate pattern of the reference run
  const auto& hist = out.outer_history;
  a.item(hist.size() >= 2, "outer iterations recorded",
         std::to_string(hist.size()) + " iterates");
  if (hist.size() >= 2) {
    a.in_range("nu^(1)", hist[0].nu(0), 8.0, 11.0);
    a.value("nu^(2)", hist[1].nu(0), 42.107, 1e-2);
  }
  a.item(out.status == MinimizeStatus::converged ||
             out.status == MinimizeStatus::stagnated,
         "outer loop converged", "status recorded");
  a.in_range("convergence iteration", static_cast<double>(hist.size()), 3, 5);

  // inner subspace framework at the reference minimizer (Table-5 point)
  const QuadPoly pstar =
      instantiate(ex.family, RealVector::Constant(1, 42.10761));
  const auto sub = subspace_psa(pstar, ex.weights, ex.epsilon);
  a.value("inner rightmost Re", sub.rightmost().real(), 0.00199163, 1e-6);
  a.value("inner rightmost Im", sub.rightmost().imag(), 0.23009178, 1e-6);
  a.count("inner iterations", sub.iterations, 6);
}

void criterion3(Acceptance& a) {
  struct Row {
    Index n;
    bool unit;
    double nu_ref;
    double val_ref;
  };
  const Row rows[] = {{80, true, 122.48, 0.00223},
                      {200, true, 123.50, 0.00438},
                      {80, false, 226.67, -0.00037},
                      {200, false, 227.20, -0.00002}};
  for (const auto& row : rows) {
    const auto ex =
        damping::build_example(damping::ExampleName::ex5_3, row.n, row.unit);
    const auto out = minimize_psa(ex.family, ex.box, ex.weights, ex.epsilon,
                                  damping_options());
    const std::string tag = ex.label + " n=" + std::to_string(row.n);
    a.value(tag + " nu*", out.minimizer(0), row.nu_ref, 0.5);
    a.value(tag + " alpha_eps(nu*)", out.value, row.val_ref, 5e-4);
    a.count(tag + " outer iterations",
            static_cast<long>(out.outer_history.size()), 5);
    a.count(tag + " inner iterations", out.max_inner_iterations, 8);
    if (row.n == 80 && row.unit) {
      const auto zero = subspace_psa(
          instantiate(ex.family, RealVector::Zero(1)), ex.weights, ex.epsilon);
      a.value(tag + " alpha_eps(P(.;0))", zero.abscissa(), 0.25226, 5e-4);
    }
  }
}

void criterion4(Acceptance& a) {
  {
    const auto ex = damping::build_example(damping::ExampleName::ex5_4a);
    const auto out = minimize_psa(ex.family, ex.box, ex.weights, ex.epsilon,
                                  damping_options());
    a.value("ex5_4a nu1*", out.minimizer(0), 27.5958, 5e-3);
    a.value("ex5_4a nu2*", out.minimizer(1), 62.1559, 5e-3);
    a.value("ex5_4a alpha_eps(nu*)", out.value, -0.0186, 5e-4);
  }
  {
    const auto ex = damping::build_example(damping::ExampleName::ex5_4b);
    const auto out = minimize_psa(ex.family, ex.box, ex.weights, ex.epsilon,
                                  damping_options());
    a.value("ex5_4b nu1*", out.minimizer(0), 72.4622, 5e-3);
    a.value("ex5_4b nu2* (at the box bound)", out.minimizer(1), 80.0, 5e-3);
    a.value("ex5_4b alpha_eps(nu*)", out.value, -0.0081, 5e-4);
  }
}

void criterion5(Acceptance& a) {
  const auto ex = damping::build_example(damping::ExampleName::ex6_2);
  const auto out =
      minimize_psa(ex.family, ex.box, ex.weights, ex.epsilon, damping_options());
  a.value("polynomial path nu*", out.minimizer(0), 66.42, 5e-2);
  a.value("polynomial path alpha_eps", out.value, 0.0012, 5e-4);

  const auto lin_fam = damping::linearization_family(ex.family);
  ObjectiveOptions oo;
  auto f = [&](const RealVector& nu) -> optimize::ObjectiveSample {
    const auto e = eval_full(lin_fam, nu, {0, 0, 1}, ex.epsilon, oo);
    if (e.gradient_valid) return {e.value, e.gradient};
    return {e.value, std::nullopt};
  };
  optimize::GlobalOptOptions go;
  go.gamma = kDampingGamma;
  const auto st = optimize::global_minimize(f, ex.box, go);
  a.value("linearization path nu_st*", st.minimizer(0), 55.47, 5e-2);
  a.value("linearization path alpha_st", st.value, 0.1155, 5e-4);

  const QuadPoly p_at = instantiate(ex.family, out.minimizer);
  const QuadPoly p_st = instantiate(ex.family, st.minimizer);
  a.value("alpha(nu*)", rightmost_eigenvalue(p_at).real(), -0.00844, 5e-5);
  a.value("alpha(nu_st*)", rightmost_eigenvalue(p_st).real(), -0.00843, 5e-5);

  const auto probe =
      damping::containment_probe(ex.family, out.minimizer, ex.epsilon, 1000);
  a.item(probe.samples >= 1000, "containment samples",
         std::to_string(probe.samples) + " members sampled");
  a.count("containment violations", probe.violations, 0);
}
