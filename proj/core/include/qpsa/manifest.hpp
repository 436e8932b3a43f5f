#pragma once

#include <string>
#include <vector>

#include "qpsa/polynomial.hpp"

namespace qpsa {

/// One coefficient term of a manifest: a matrix file plus a coefficient
/// expression in the nu1/nu2/... grammar.
struct ManifestTerm {
  std::string file;
  std::string coeff;
  ComplexMatrix matrix;
};

/// On-disk problem description: sizes, weights, epsilon, parameter box and
/// the mass/damping/stiffness term lists. Matrices live in Matrix Market
/// files next to the manifest.
struct ProblemManifest {
  Index n = 0;
  Index d = 1;
  double epsilon = 0.0;
  Weights weights;
  Box box;
  std::vector<ManifestTerm> mass_terms;
  std::vector<ManifestTerm> damping_terms;
  std::vector<ManifestTerm> stiffness_terms;

  /// Compile the term lists into an evaluatable family.
  ParamQuadratic family() const;
};

/// Parse a manifest JSON file, loading and checking all referenced
/// matrices. Errors carry the offending file or field name.
ProblemManifest parse_manifest(const std::string& path);

/// Write manifest JSON plus the referenced matrix files into dir.
void write_manifest(const ProblemManifest& m, const std::string& dir,
                    const std::string& filename = "manifest.json");

}  // namespace qpsa
