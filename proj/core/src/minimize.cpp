#include "qpsa/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "qpsa/kernels.hpp"

namespace qpsa {

std::vector<RealVector> initial_nodes(const Box& box, int eta) {
  box.validate();
  if (eta < 1) throw InputError("eta must be >= 1");
  std::vector<RealVector> nodes;
  if (eta == 1) {
    nodes.push_back(0.5 * (box.lower + box.upper));
    return nodes;
  }
  for (int i = 0; i < eta; ++i) {
    const double t = static_cast<double>(i) / (eta - 1);
    nodes.push_back(box.lower + t * (box.upper - box.lower));
  }
  return nodes;
}

std::optional<std::string> stagnation_check(
    const std::vector<OuterIterate>& history, double tol) {
  for (std::size_t k = 1; k < history.size(); ++k) {
    for (std::size_t l = 0; l < k; ++l) {
      if ((history[k].nu - history[l].nu).lpNorm<Eigen::Infinity>() <= tol) {
        std::ostringstream msg;
        msg << "outer iterates " << (l + 1) << " and " << (k + 1)
            << " coincide within " << tol
            << " componentwise; the repeated iterate is a global minimizer "
               "(floating-point surrogate for exact repetition)";
        return msg.str();
      }
    }
  }
  return std::nullopt;
}

namespace {

struct FullPsaResult {
  Complex z;
  ComplexVector v;  // right singular vector at the rightmost point
  int inner_iterations = 0;
};

FullPsaResult full_rightmost(const ParamQuadratic& family,
                             const RealVector& nu, const Weights& w,
                             double eps, const MinimizeSfOptions& opts,
                             const std::vector<Complex>& seeds) {
  const QuadPoly p = instantiate(family, nu);
  FullPsaResult out;
  if (p.size() <= opts.direct_threshold) {
    const auto psa = criss_cross(p, w, eps, opts.objective.crisscross);
    out.z = psa.rightmost;
  } else {
    const auto sub = subspace_psa(p, w, eps, opts.objective.subspace, seeds);
    out.z = sub.rightmost();
    out.inner_iterations = sub.iterations;
  }
  if (p.conj_symmetric() && out.z.imag() < 0.0) out.z = std::conj(out.z);
  out.v = kernels::smallest_singular_triplet(eval_poly(p, out.z)).v;
  return out;
}

}  // namespace

MinimizeOutcome minimize_psa(const ParamQuadratic& family, const Box& box,
                             const Weights& w, double eps,
                             const MinimizeSfOptions& opts) {
  family.validate();
  box.validate();
  w.validate();
  if (eps <= 0.0) throw InputError("eps must be positive");
  if (box.dim() != family.dim)
    throw InputError("box dimension does not match the family");

  const Index d = family.dim;
  MinimizeOutcome out;

  // initialization: full rightmost points at the interpolation nodes, their
  // right singular vectors spanning V_0
  out.nodes = initial_nodes(box, opts.effective_eta(d));
  std::vector<Complex> zcache;
  ComplexMatrix V;
  double best_node_value = std::numeric_limits<double>::infinity();
  RealVector best_node = out.nodes.front();
  for (const RealVector& node : out.nodes) {
    const auto res = full_rightmost(family, node, w, eps, opts, zcache);
    out.max_inner_iterations =
        std::max(out.max_inner_iterations, res.inner_iterations);
    out.node_rightmost.push_back(res.z);
    zcache.push_back(res.z);
    if (V.size() == 0) {
      V = res.v / res.v.norm();
    } else {
      V = kernels::orth_extend(V, res.v).basis;
    }
    if (res.z.real() < best_node_value) {
      best_node_value = res.z.real();
      best_node = node;
    }
  }

  // recently found reduced rightmost points are kept as extra warm-start
  // seeds for the reduced criss-cross runs
  std::deque<Complex> recent;
  auto evaluator = [&](const RealVector& nu) -> optimize::ObjectiveSample {
    std::vector<Complex> seeds = zcache;
    seeds.insert(seeds.end(), recent.begin(), recent.end());
    const ObjectiveEval e =
        eval_reduced(family, nu, V, w, eps, seeds, opts.objective);
    if (e.empty_reduced) {
      out.sentinel_hit = true;
      return {e.value, std::nullopt};
    }
    recent.push_back(e.rightmost);
    if (recent.size() > 8) recent.pop_front();
    if (e.gradient_valid) return {e.value, e.gradient};
    return {e.value, std::nullopt};
  };

  double prev_reduced = std::numeric_limits<double>::quiet_NaN();
  out.status = MinimizeStatus::max_outer;

  optimize::GlobalOptOptions global_opts = opts.global;
  if (global_opts.initial_points.empty())
    global_opts.initial_points = out.nodes;
  if (d >= 2) global_opts.polish = true;

  for (int k = 1; k <= opts.max_outer; ++k) {
    recent.clear();
    optimize::OptRun run;
    if (d <= 2) {
      run = optimize::global_minimize(evaluator, box, global_opts);
    } else {
      run = optimize::bfgs_minimize(evaluator, box, best_node, opts.bfgs);
    }

    const RealVector nu_k = run.minimizer;
    const auto full = full_rightmost(family, nu_k, w, eps, opts, zcache);
    out.max_inner_iterations =
        std::max(out.max_inner_iterations, full.inner_iterations);

    OuterIterate it;
    it.nu = nu_k;
    it.reduced_value = run.value;
    it.full_value = full.z.real();
    it.z = full.z;
    it.subspace_dim = V.cols();
    it.reduced_certified = run.status == optimize::OptStatus::certified;
    out.outer_history.push_back(it);

    out.minimizer = nu_k;
    out.value = it.full_value;
    out.rightmost = full.z;
    out.V = V;

    out.certificate = stagnation_check(out.outer_history);
    if (out.certificate) {
      out.status = MinimizeStatus::stagnated;
      break;
    }
    if (k >= 2 && std::abs(run.value - prev_reduced) <=
                      opts.outer_tol * std::max(1.0, std::abs(run.value))) {
      out.status = MinimizeStatus::converged;
      break;
    }
    prev_reduced = run.value;

    // a no-growth expansion keeps V as is; the stagnating reduced optima
    // terminate the loop on the next iteration
    auto ext = kernels::orth_extend(V, full.v);
    zcache.push_back(full.z);
    V = std::move(ext.basis);
  }
  return out;
}

}  // namespace qpsa
