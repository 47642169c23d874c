#include "witten/catalog.hpp"

#include <cmath>

#include "witten/error.hpp"

namespace witten {

MorseFunctionSpec cosine_sum(const std::string& name, std::vector<double> a, std::vector<double> k) {
  if (a.empty() || a.size() != k.size()) {
    throw Error(ErrorCode::LengthMismatch, "amplitudes and wavenumbers differ in length");
  }
  const int n = static_cast<int>(a.size());
  const double period = 2.0 * M_PI;
  Chart chart;
  chart.name = "angles";
  chart.f = [a, k](const Eigen::VectorXd& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::cos(k[i] * x[static_cast<Eigen::Index>(i)]);
    return s;
  };
  chart.grad = [a, k](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(x.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto j = static_cast<Eigen::Index>(i);
      g[j] = -a[i] * k[i] * std::sin(k[i] * x[j]);
    }
    return g;
  };
  chart.hess = [a, k](const Eigen::VectorXd& x) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto j = static_cast<Eigen::Index>(i);
      h(j, j) = -a[i] * k[i] * k[i] * std::cos(k[i] * x[j]);
    }
    return h;
  };
  chart.seed_lo = Eigen::VectorXd::Zero(n);
  chart.seed_hi = Eigen::VectorXd::Constant(n, period);
  chart.trust_lo = chart.seed_lo;
  chart.trust_hi = chart.seed_hi;
  chart.embed = [n](const Eigen::VectorXd& x) {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    for (int i = 0; i < n && i < 3; ++i) p[i] = x[i];
    return p;
  };

  MorseFunctionSpec spec;
  spec.name = name;
  spec.dim = n;
  spec.period = period;
  spec.charts = {chart};
  if (n == 1) {
    // The cycle complex sits on the unit circle: angle = atan2(y, x).
    spec.ambient = [f = chart.f](const Eigen::Vector3d& p) {
      Eigen::VectorXd x(1);
      x[0] = std::atan2(p[1], p[0]);
      return f(x);
    };
  } else {
    // Torus grids store chart coordinates directly.
    spec.ambient = [f = chart.f, n](const Eigen::Vector3d& p) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x[i] = p[i];
      return f(x);
    };
  }
  return spec;
}

MorseFunctionSpec sphere_height() {
  // sign = -1: projection from the north pole (covers the south pole);
  // sign = +1: projection from the south pole.
  auto make = [](double sign, const std::string& name) {
    Chart c;
    c.name = name;
    c.f = [sign](const Eigen::VectorXd& x) {
      const double s = 1.0 + x.squaredNorm();
      return sign * (2.0 / s - 1.0);
    };
    c.grad = [sign](const Eigen::VectorXd& x) {
      const double s = 1.0 + x.squaredNorm();
      return Eigen::VectorXd(sign * (-4.0 / (s * s)) * x);
    };
    c.hess = [sign](const Eigen::VectorXd& x) {
      const double s = 1.0 + x.squaredNorm();
      Eigen::MatrixXd h = (-4.0 / (s * s)) * Eigen::MatrixXd::Identity(2, 2) +
                          (16.0 / (s * s * s)) * x * x.transpose();
      return Eigen::MatrixXd(sign * h);
    };
    c.seed_lo = Eigen::VectorXd::Constant(2, -1.2);
    c.seed_hi = Eigen::VectorXd::Constant(2, 1.2);
    c.trust_lo = c.seed_lo;
    c.trust_hi = c.seed_hi;
    c.embed = [sign](const Eigen::VectorXd& x) {
      const double r2 = x.squaredNorm();
      const double s = 1.0 + r2;
      return Eigen::Vector3d(2.0 * x[0] / s, 2.0 * x[1] / s, sign * (1.0 - r2) / s);
    };
    return c;
  };
  MorseFunctionSpec spec;
  spec.name = "sphere/height";
  spec.dim = 2;
  spec.charts = {make(-1.0, "stereographic-north"), make(1.0, "stereographic-south")};
  spec.ambient = [](const Eigen::Vector3d& p) { return p[2]; };
  return spec;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"circle/cos", "f = cos x on the circle", "cycle", {12, 0, 0}, 1},
      {"sphere/height", "f = z on the unit sphere", "icosphere", {1, 0, 0}, 2},
      {"torus/cos+cos", "f = cos x + cos y on the flat torus", "torus_grid", {0, 16, 16}, 2},
      {"torus/cos2x+cosy", "f = cos 2x + cos y on the flat torus", "torus_grid", {0, 16, 16}, 2},
  };
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& key) {
  for (const auto& e : catalog()) {
    if (e.key == key) return e;
  }
  throw Error(ErrorCode::UnknownCatalogEntry, "unknown catalog entry '" + key + "'");
}

MorseFunctionSpec catalog_function(const std::string& key) {
  const CatalogEntry& e = catalog_entry(key);
  if (e.key == "circle/cos") return cosine_sum(e.key, {1.0}, {1.0});
  if (e.key == "sphere/height") return sphere_height();
  if (e.key == "torus/cos+cos") return cosine_sum(e.key, {1.0, 1.0}, {1.0, 1.0});
  return cosine_sum(e.key, {1.0, 1.0}, {2.0, 1.0});
}

SimplicialComplex catalog_complex(const std::string& key) {
  const CatalogEntry& e = catalog_entry(key);
  return generate(e.complex_name, e.complex_params);
}

}  // namespace witten
