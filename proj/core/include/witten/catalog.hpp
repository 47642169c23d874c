#pragma once

#include <string>
#include <vector>

#include "witten/morse.hpp"
#include "witten/simplicial.hpp"

namespace witten {

/// A named (manifold, Morse function) pair with the complex it is sampled on.
struct CatalogEntry {
  std::string key;  // "circle/cos", "sphere/height", "torus/cos+cos", "torus/cos2x+cosy"
  std::string description;
  std::string complex_name;
  GeneratorParams complex_params;
  int dim = 0;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& key);
MorseFunctionSpec catalog_function(const std::string& key);
SimplicialComplex catalog_complex(const std::string& key);

/// Separable periodic function sum_i a_i cos(k_i x_i) on the flat torus.
MorseFunctionSpec cosine_sum(const std::string& name, std::vector<double> amplitudes,
                             std::vector<double> wavenumbers);

/// Height z on the unit sphere in two stereographic charts.
MorseFunctionSpec sphere_height();

}  // namespace witten
