#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <mutex>

#include "witten/catalog.hpp"
#include "witten/deformation.hpp"
#include "witten/error.hpp"
#include "witten/harness.hpp"
#include "witten/morse.hpp"
#include "witten/semiclassical.hpp"
#include "witten/simplicial.hpp"
#include "witten/susy.hpp"

namespace witten {

namespace {

using Clock = std::chrono::steady_clock;
using Fields = std::vector<std::pair<std::string, ReportValue>>;

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string verdict(bool ok) { return ok ? "pass" : "fail"; }

std::string experiment_id(const ExperimentConfig& c) { return c.name.empty() ? c.kind : c.name; }

SimplicialComplex build_complex(const ExperimentConfig& c) {
  if (!c.off.empty()) return load_off(c.off);
  if (!c.complex.empty()) {
    GeneratorParams params;
    params.n = c.complex_size;
    params.nx = c.complex_size;
    params.ny = c.complex_size;
    return generate(c.complex, params);
  }
  return catalog_complex(c.function);
}

HodgeStarSet build_stars(const ExperimentConfig& c, const SimplicialComplex& complex) {
  return c.stars == "circumcentric" ? circumcentric_stars(complex) : combinatorial_stars(complex);
}

int alternating(const std::vector<int>& v) {
  int s = 0;
  for (std::size_t p = 0; p < v.size(); ++p) s += (p % 2 ? -1 : 1) * v[p];
  return s;
}

std::vector<ReportRow> run_betti(const ExperimentConfig& c) {
  const auto start = Clock::now();
  const SimplicialComplex complex = build_complex(c);
  const auto beta = betti_numbers(complex, build_stars(c, complex));
  const int chi = euler_characteristic(complex);
  const bool chi_ok = alternating(beta) == chi;
  std::vector<ReportRow> rows;
  for (std::size_t p = 0; p < beta.size(); ++p) {
    bool ok = chi_ok;
    if (!c.expected.empty()) ok = ok && p < c.expected.size() && c.expected[p] == beta[p];
    rows.push_back({"", {{"p", static_cast<long long>(p)}, {"beta", static_cast<long long>(beta[p])}},
                    verdict(ok), 0.0});
  }
  if (!c.expected.empty() && c.expected.size() != beta.size()) {
    for (auto& r : rows) r.verdict = "fail";
  }
  for (auto& r : rows) r.seconds = since(start);
  return rows;
}

std::vector<ReportRow> run_morse_verify(const ExperimentConfig& c) {
  const auto start = Clock::now();
  const MorseFunctionSpec spec = catalog_function(c.function);
  const SimplicialComplex complex = c.complex.empty() && c.off.empty() ? catalog_complex(c.function)
                                                                       : build_complex(c);
  const auto beta = betti_numbers(complex, build_stars(c, complex));
  const auto points = find_critical_points(spec, c.resolution);
  const MorseCounts m = morse_counts(points, spec.dim);
  const auto weak = check_weak(m, beta);
  const auto strong = check_strong(m, beta);
  const int chi = euler_characteristic(complex);
  const int chi_morse = alternating(m);
  std::vector<ReportRow> rows;
  for (std::size_t p = 0; p < beta.size(); ++p) {
    const bool ok = weak.holds[p] && strong.holds[p] && strong.top_equality && chi_morse == chi;
    rows.push_back({"",
                    {{"p", static_cast<long long>(p)},
                     {"M", static_cast<long long>(m[p])},
                     {"beta", static_cast<long long>(beta[p])},
                     {"weak", verdict(weak.holds[p])},
                     {"strong_lhs", static_cast<long long>(strong.lhs[p])},
                     {"strong_rhs", static_cast<long long>(strong.rhs[p])},
                     {"strong", verdict(strong.holds[p])},
                     {"chi_morse", static_cast<long long>(chi_morse)},
                     {"chi", static_cast<long long>(chi)}},
                    verdict(ok), since(start)});
  }
  return rows;
}

std::vector<ReportRow> run_witten_scan(const ExperimentConfig& c) {
  const MorseFunctionSpec spec = catalog_function(c.function);
  std::vector<ReportRow> rows;
  if (c.grid > 0) {
    TorusGrid grid{spec.dim, c.grid, c.order};
    std::vector<int> beta;
    for (int p = 0; p <= spec.dim; ++p) {
      beta.push_back(kernel_dimension(grid_conjugated_laplacian(grid, spec, 0.0, p), 1e-6, c.seed));
    }
    for (double t : c.t_schedule) {
      for (int p = 0; p <= spec.dim; ++p) {
        const auto start = Clock::now();
        const int k = kernel_dimension(grid_conjugated_laplacian(grid, spec, t, p), 1e-6, c.seed);
        rows.push_back({"",
                        {{"t", t}, {"p", static_cast<long long>(p)}, {"kernel", static_cast<long long>(k)},
                         {"beta", static_cast<long long>(beta[static_cast<std::size_t>(p)])}},
                        verdict(k == beta[static_cast<std::size_t>(p)]), since(start)});
      }
    }
    return rows;
  }
  const SimplicialComplex complex = c.complex.empty() && c.off.empty() ? catalog_complex(c.function)
                                                                       : build_complex(c);
  const HodgeStarSet stars = build_stars(c, complex);
  const auto beta = betti_numbers(complex, stars);
  const auto samples = sample_barycenters(complex, spec.ambient);
  for (double t : c.t_schedule) {
    const auto start = Clock::now();
    const DeformedComplex deformed = deform(complex, stars, samples, t);
    for (int p = 0; p <= deformed.top(); ++p) {
      const int k = kernel_dimension(witten_laplacian_dec(deformed, p), 1e-6, c.seed);
      rows.push_back({"",
                      {{"t", t}, {"p", static_cast<long long>(p)}, {"kernel", static_cast<long long>(k)},
                       {"beta", static_cast<long long>(beta[static_cast<std::size_t>(p)])}},
                      verdict(k == beta[static_cast<std::size_t>(p)]), since(start)});
    }
  }
  return rows;
}

double harmonic_h(const Eigen::VectorXd& x) { return x.squaredNorm(); }
double double_well_h(const Eigen::VectorXd& x) {
  const double s = x[0] * x[0] - 1.0;
  return s * s;
}

std::vector<ReportRow> run_semiclassical(const ExperimentConfig& c) {
  const int N = c.grid > 0 ? c.grid : 2048;
  std::function<SparseSymOperator(double)> family;
  std::vector<double> model;
  std::vector<double> schedule = c.lambda_schedule;
  int skip = 0;
  if (c.potential == "witten-torus") {
    const MorseFunctionSpec spec = catalog_function(c.function);
    const TorusGrid grid{spec.dim, N, c.order};
    validate_grid(grid);
    std::vector<WellData> wells;
    for (const auto& cp : find_critical_points(spec, c.resolution)) {
      wells.push_back(form_well(cp.location, spec.charts[static_cast<std::size_t>(cp.chart)].hess(cp.location)));
    }
    const ModelSpectrum ms = form_model_spectrum(spec.dim, wells, 1, c.n_eigs + 4 * static_cast<int>(wells.size()));
    skip = model_kernel_dimension(ms);
    const auto values = ms.values();
    model.assign(values.begin() + skip, values.end());
    family = [grid, spec](double t) { return grid_conjugated_laplacian(grid, spec, t, 1); };
    schedule = c.t_schedule;
  } else {
    const bool harmonic = c.potential == "harmonic";
    const Potential h = harmonic ? Potential(harmonic_h) : Potential(double_well_h);
    const Potential g = [](const Eigen::VectorXd&) { return 0.0; };
    std::vector<WellData> wells;
    std::vector<Eigen::VectorXd> locations;
    const Eigen::MatrixXd hess = Eigen::MatrixXd::Constant(1, 1, harmonic ? 2.0 : 8.0);
    for (double x : harmonic ? std::vector<double>{0.0} : std::vector<double>{-1.0, 1.0}) {
      locations.push_back(Eigen::VectorXd::Constant(1, x));
      wells.push_back(scalar_well(locations.back(), hess, 0.0));
    }
    model = scalar_model_spectrum(wells, c.n_eigs).values();
    const BoxDomain domain{{-c.box}, {c.box}, false};
    family = [=](double lambda) { return scalar_schrodinger_grid(domain, h, g, lambda, N, locations); };
  }
  const auto start = Clock::now();
  const ConvergenceTable table = semiclassical_convergence(family, model, schedule, c.n_eigs, skip, c.seed);
  const double seconds = since(start);
  std::vector<ReportRow> rows;
  const double last = schedule.back();
  for (const auto& r : table.rows) {
    const bool mono = table.monotone[static_cast<std::size_t>(r.n - 1)];
    // The final parameter must meet the tolerance; earlier rows pass when the
    // deviation for that level decreases along the schedule.
    const bool ok = r.lambda == last ? r.deviation < c.tolerance : (mono || r.deviation < c.tolerance);
    rows.push_back({"",
                    {{"lambda", r.lambda},
                     {"n", static_cast<long long>(r.n)},
                     {"E_n/lambda", r.ratio},
                     {"e_n", r.model},
                     {"deviation", r.deviation},
                     {"monotone", verdict(mono)}},
                    verdict(ok), seconds});
  }
  return rows;
}

Fields check_fields(double t, const std::string& check, long long index, double lhs, double rhs, double deviation) {
  return {{"t", t}, {"check", check}, {"index", index}, {"lhs", lhs}, {"rhs", rhs}, {"deviation", deviation}};
}

std::vector<ReportRow> run_susy_pairing(const ExperimentConfig& c) {
  std::vector<ReportRow> rows;
  const bool have_function = !c.function.empty();
  const MorseFunctionSpec spec = have_function ? catalog_function(c.function) : MorseFunctionSpec{};

  if (c.low_lying) {
    if (!have_function) throw Error(ErrorCode::ConfigError, "config: function: required with low_lying");
    const TorusGrid grid{spec.dim, c.grid > 0 ? c.grid : 64, c.order};
    std::vector<int> kernel;
    for (int p = 0; p <= spec.dim; ++p) {
      kernel.push_back(kernel_dimension(grid_conjugated_laplacian(grid, spec, 0.0, p), 1e-6, c.seed));
    }
    for (double t : c.t_schedule) {
      const auto start = Clock::now();
      std::vector<SparseSymOperator> ops;
      for (int p = 0; p <= spec.dim; ++p) ops.push_back(grid_conjugated_laplacian(grid, spec, t, p));
      const GradedSpectrum spectra = graded_spectrum(ops, c.eigs, t, c.seed);
      const LowLyingReport ll = low_lying(spectra, t, SplitRule{}, kernel);
      const MorseCounts m = morse_counts(find_critical_points(spec, c.resolution), spec.dim);
      const StrongFromCounts strong = strong_inequalities_from_counts(ll, kernel);
      const double seconds = since(start);
      for (int p = 0; p <= spec.dim; ++p) {
        const auto i = static_cast<std::size_t>(p);
        const int excess = m[i] - kernel[i];
        rows.push_back({"", check_fields(t, "low_lying", p, ll.low_lying[i], excess, ll.low_lying[i] - excess),
                        verdict(ll.low_lying[i] == excess), seconds});
      }
      for (std::size_t q = 0; q < strong.strong.lhs.size(); ++q) {
        rows.push_back({"",
                        check_fields(t, "strong", static_cast<long long>(q), strong.strong.lhs[q],
                                     strong.strong.rhs[q], strong.strong.lhs[q] - strong.strong.rhs[q]),
                        verdict(strong.strong.holds[q] && strong.balanced), seconds});
      }
    }
    return rows;
  }

  const SimplicialComplex complex = build_complex(c);
  const HodgeStarSet stars = build_stars(c, complex);
  std::vector<Eigen::VectorXd> samples;
  if (have_function) {
    samples = sample_barycenters(complex, spec.ambient);
  } else {
    for (int p = 0; p <= complex.top(); ++p) samples.push_back(Eigen::VectorXd::Zero(complex.count(p)));
  }
  for (double t : c.t_schedule) {
    const auto start = Clock::now();
    const DeformedComplex deformed = deform(complex, stars, samples, t);
    const Supercharge q = supercharge(deformed, 1.0);  // reported, judged below
    const bool q_ok = q.square_deviation <= 1e-10 && q.grading_deviation <= 1e-10;
    rows.push_back({"", check_fields(t, "supercharge", 0, q.square_deviation, q.grading_deviation,
                                     std::max(q.square_deviation, q.grading_deviation)),
                    verdict(q_ok), since(start)});
    std::vector<SparseSymOperator> ops;
    for (int p = 0; p <= deformed.top(); ++p) ops.push_back(witten_laplacian_dec(deformed, p));
    const GradedSpectrum spectra = graded_spectrum(ops, c.eigs, t, c.seed);
    double scale = 0.0;
    for (double s : spectra.scales) scale = std::max(scale, s);
    const PairingReport pr = pairing_check(spectra, 1e3 * zero_floor(scale), c.match_tol, c.pair_count);
    const double seconds = since(start);
    long long i = 0;
    for (const auto& [even, odd] : pr.pairs) {
      const double rel = std::abs(even - odd) / std::max(std::abs(even), std::abs(odd));
      rows.push_back({"", check_fields(t, "pair", i++, even, odd, rel), verdict(rel <= c.match_tol), seconds});
    }
    const double nan = std::nan("");
    for (double v : pr.unmatched_even) {
      rows.push_back({"", check_fields(t, "unmatched_even", i++, v, nan, nan), verdict(pr.pass), seconds});
    }
    for (double v : pr.unmatched_odd) {
      rows.push_back({"", check_fields(t, "unmatched_odd", i++, nan, v, nan), "fail", seconds});
    }
  }
  return rows;
}

}  // namespace

std::vector<ReportRow> run_experiment(const ExperimentConfig& config) {
  const std::string id = experiment_id(config);
  std::vector<ReportRow> rows;
  const auto start = Clock::now();
  try {
    validate_config(config);
    if (config.kind == "betti") rows = run_betti(config);
    else if (config.kind == "morse-verify") rows = run_morse_verify(config);
    else if (config.kind == "witten-scan") rows = run_witten_scan(config);
    else if (config.kind == "semiclassical") rows = run_semiclassical(config);
    else rows = run_susy_pairing(config);
  } catch (const Error& e) {
    rows = {{"", {{"detail", id + ": " + e.what()}}, "error:" + std::string(to_string(e.code())), since(start)}};
  }
  for (auto& r : rows) r.experiment = id;
  return rows;
}

namespace {

std::mutex& write_mutex() {
  static std::mutex m;
  return m;
}

RunResult finish(const ExperimentConfig& config, std::vector<ReportRow> rows) {
  RunResult result;
  const std::filesystem::path dir(config.out);
  result.csv_path = (dir / (experiment_id(config) + ".csv")).string();
  result.json_path = (dir / (experiment_id(config) + ".json")).string();
  result.rows = std::move(rows);
  {
    std::lock_guard<std::mutex> lock(write_mutex());
    emit_csv(result.rows, result.csv_path, config.timing);
    emit_json(result.rows, result.json_path, config.timing);
  }
  for (const auto& r : result.rows) {
    if (r.verdict != "pass") result.exit_code = 1;
  }
  return result;
}

}  // namespace

RunResult run(const ExperimentConfig& config) { return finish(config, run_experiment(config)); }

std::vector<RunResult> run_batch(const std::vector<ExperimentConfig>& configs) {
  std::vector<std::future<std::vector<ReportRow>>> jobs;
  for (const auto& c : configs) {
    jobs.push_back(std::async(std::launch::async, [&c] { return run_experiment(c); }));
  }
  std::vector<RunResult> results;
  for (std::size_t i = 0; i < configs.size(); ++i) results.push_back(finish(configs[i], jobs[i].get()));
  return results;
}

}  // namespace witten
