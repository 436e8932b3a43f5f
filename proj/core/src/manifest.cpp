#include "qpsa/manifest.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qpsa/expr.hpp"
#include "qpsa/matrix_market.hpp"

namespace qpsa {

namespace fs = std::filesystem;
using nlohmann::json;

ParamQuadratic ProblemManifest::family() const {
  ParamQuadratic fam;
  fam.size = n;
  fam.dim = d;
  auto compile = [&](const std::vector<ManifestTerm>& terms,
                     std::vector<CoeffTerm>* out) {
    for (const auto& t : terms) {
      const auto expr = parse_coeff_expr(t.coeff);
      out->push_back({compile_coeff_expr(*expr, d), t.matrix});
    }
  };
  compile(mass_terms, &fam.mass_terms);
  compile(damping_terms, &fam.damping_terms);
  compile(stiffness_terms, &fam.stiffness_terms);
  fam.validate();
  return fam;
}

namespace {

std::vector<ManifestTerm> parse_terms(const json& j, const char* key,
                                      const fs::path& base, Index n, Index d) {
  std::vector<ManifestTerm> out;
  if (!j.contains(key)) return out;
  for (const auto& item : j.at(key)) {
    ManifestTerm t;
    t.file = item.at("file").get<std::string>();
    t.coeff = item.at("coeff").get<std::string>();
    const fs::path p = fs::path(t.file).is_absolute() ? fs::path(t.file)
                                                      : base / t.file;
    t.matrix = read_matrix_market(p.string());
    if (t.matrix.rows() != n || t.matrix.cols() != n)
      throw InputError("matrix in " + t.file + " is " +
                       std::to_string(t.matrix.rows()) + "x" +
                       std::to_string(t.matrix.cols()) + ", expected " +
                       std::to_string(n) + "x" + std::to_string(n));
    const auto expr = parse_coeff_expr(t.coeff);
    if (expr_max_param(*expr) >= d)
      throw InputError("coefficient '" + t.coeff +
                       "' references a parameter beyond d");
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

ProblemManifest parse_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("manifest " + path + ": " + e.what());
  }

  ProblemManifest m;
  try {
    m.n = j.at("n").get<Index>();
    m.d = j.at("d").get<Index>();
    m.epsilon = j.at("epsilon").get<double>();
    const auto w = j.at("weights");
    if (!w.is_array() || w.size() != 3)
      throw InputError("weights must be [wm, wc, wk]");
    m.weights = {w[0].get<double>(), w[1].get<double>(), w[2].get<double>()};
    const auto& box = j.at("box");
    const auto lo = box.at("lower").get<std::vector<double>>();
    const auto hi = box.at("upper").get<std::vector<double>>();
    if (static_cast<Index>(lo.size()) != m.d ||
        static_cast<Index>(hi.size()) != m.d)
      throw InputError("box bounds must have length d");
    m.box.lower = Eigen::Map<const RealVector>(lo.data(), m.d);
    m.box.upper = Eigen::Map<const RealVector>(hi.data(), m.d);
  } catch (const json::exception& e) {
    throw InputError("manifest " + path + ": " + e.what());
  }
  if (m.n < 1 || m.d < 1) throw InputError("manifest: n and d must be >= 1");
  if (m.epsilon <= 0.0) throw InputError("manifest: epsilon must be positive");
  m.weights.validate();
  m.box.validate();

  const fs::path base = fs::path(path).parent_path();
  m.mass_terms = parse_terms(j, "mass_terms", base, m.n, m.d);
  m.damping_terms = parse_terms(j, "damping_terms", base, m.n, m.d);
  m.stiffness_terms = parse_terms(j, "stiffness_terms", base, m.n, m.d);
  if (m.mass_terms.empty() && m.damping_terms.empty() &&
      m.stiffness_terms.empty())
    throw InputError("manifest " + path + " declares no coefficient terms");
  return m;
}

void write_manifest(const ProblemManifest& m, const std::string& dir,
                    const std::string& filename) {
  fs::create_directories(dir);
  json j;
  j["n"] = m.n;
  j["d"] = m.d;
  j["epsilon"] = m.epsilon;
  j["weights"] = {m.weights.wm, m.weights.wc, m.weights.wk};
  j["box"]["lower"] = std::vector<double>(m.box.lower.data(),
                                          m.box.lower.data() + m.box.dim());
  j["box"]["upper"] = std::vector<double>(m.box.upper.data(),
                                          m.box.upper.data() + m.box.dim());

  auto emit = [&](const std::vector<ManifestTerm>& terms, const char* key) {
    json arr = json::array();
    for (const auto& t : terms) {
      write_matrix_market((fs::path(dir) / t.file).string(), t.matrix);
      arr.push_back({{"file", t.file}, {"coeff", t.coeff}});
    }
    j[key] = arr;
  };
  emit(m.mass_terms, "mass_terms");
  emit(m.damping_terms, "damping_terms");
  emit(m.stiffness_terms, "stiffness_terms");

  std::ofstream out(fs::path(dir) / filename);
  if (!out) throw InputError("cannot write manifest into " + dir);
  out << j.dump(2) << "\n";
}

}  // namespace qpsa
