// Copyright 2026 The IQAE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Executes a validated RunConfig and renders the result document.

#pragma once

#include <Eigen/Core>
#include <chrono>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "iqae/backends.hpp"
#include "iqae/config.hpp"
#include "iqae/eigensolver.hpp"
#include "iqae/json_io.hpp"
#include "iqae/models.hpp"
#include "iqae/oracles.hpp"
#include "iqae/overlap.hpp"

namespace iqae {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::size_t kDenseLimit = 12;

struct RunResult {
  json document;
  /// Column names and rows for CSV output, in fixed order.
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  std::string summary;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

inline ReferenceState make_state(const StateSpec& s, const PauliHamiltonian& h) {
  const std::size_t n = h.n_qubits();
  if (s.kind == "plus") return ReferenceState::plus_state(n);
  if (s.kind == "zero") return ReferenceState::basis_state(n);
  if (s.kind == "basis") {
    std::vector<bool> ones(n, false);
    for (std::size_t q : s.ones) {
      if (q >= n) throw ConfigError("state.ones entry " + std::to_string(q) + " is out of range");
      ones[q] = true;
    }
    return ReferenceState::basis_state(n, ones);
  }
  if (s.kind == "product") {
    if (s.bloch.size() != n) throw ConfigError("state.bloch needs one vector per qubit");
    try {
      return ReferenceState::product(s.bloch);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("state.bloch: ") + e.what());
    }
  }
  if (n > s.statevector_limit) {
    throw ConfigError("state.kind '" + s.kind + "' needs " + std::to_string(n) +
                      " qubits, above state.statevector_limit");
  }
  if (s.kind == "hardware_efficient") return prepare_hardware_efficient(n, s.layers, s.seed, s.statevector_limit);
  if (s.kind == "qaoa") {
    auto angles = s.qaoa_angles.empty() ? optimize_qaoa_angles(h, s.p) : s.qaoa_angles;
    return prepare_qaoa(h, angles, nullptr, s.statevector_limit);
  }
  if (n != 2) throw ConfigError("state.kind 'ry_cnot' needs a two-qubit model");
  if (s.angles.size() == 2) return prepare_ry_cnot(s.angles[0], s.angles[1]);
  return prepare_ry_cnot({s.angles[0], s.angles[1], s.angles[2], s.angles[3]});
}

inline std::shared_ptr<ExpectationBackend> make_backend(const BackendSpec& b, const ReferenceState& state,
                                                        std::size_t limit) {
  auto plain = [&](const std::string& kind) -> std::shared_ptr<ExpectationBackend> {
    if (kind == "product") {
      if (state.kind() != ReferenceState::Kind::product) {
        throw ConfigError("backend product needs a product state (plus, zero, basis or product)");
      }
      return std::make_shared<ProductBackend>(state);
    }
    if (state.n_qubits() > limit) throw ConfigError("backend exact exceeds state.statevector_limit; use product");
    return std::make_shared<ExactBackend>(state, limit);
  };
  if (b.kind != "sampled") return plain(b.kind);
  return std::make_shared<SampledBackend>(plain(b.inner), ShotModel{b.shots, b.seed, b.grouping});
}

inline std::optional<StateVector> dense_state(const ReferenceState& state) {
  if (state.n_qubits() > kDenseLimit) return std::nullopt;
  return state.statevector();
}

inline double fidelity(const oracle::Vector& ground, const MomentBasis& basis, const Eigen::VectorXcd& alpha,
                       const StateVector& psi) {
  const oracle::Vector v = oracle::to_vector(reconstruct(basis, alpha, psi));
  return std::norm(ground.dot(v)) / v.squaredNorm();
}

inline MomentBasis make_basis(const RunConfig& cfg, const PauliHamiltonian& h, std::size_t K) {
  MomentBasis basis = MomentBasis::build(h.generators(), K, cfg.solver.cap);
  if (cfg.select) {
    try {
      basis = basis.select(*cfg.select);
    } catch (const std::out_of_range& e) {
      throw ConfigError(std::string("solver.select: ") + e.what());
    }
  }
  return basis;
}

inline json maybe(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

inline std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// ---- modes ----------------------------------------------------------------

inline void run_solve(const RunConfig& cfg, RunResult& out) {
  const PauliHamiltonian h = models::build_model(cfg.model);
  const ReferenceState state = make_state(cfg.state, h);
  auto backend = make_backend(cfg.backend, state, cfg.state.statevector_limit);

  GroundStateSolution sol;
  MomentBasis basis;
  std::size_t unique = 0;
  if (cfg.select) {
    basis = make_basis(cfg, h, cfg.solver.K_max);
    const OverlapSet set = assemble(basis, h, *backend, {.factored = false});
    sol = solve(*set.D_fixed, set.E, cfg.solver, set.exact);
    unique = set.cache.size();
  } else {
    IterationResult r = iterate_with_overlaps(h, *backend, cfg.solver);
    sol = std::move(r.solution);
    basis = r.overlaps.basis;
    unique = r.overlaps.cache.size();
  }

  json result = {{"energy", sol.energy},
                 {"basis_size", basis.size()},
                 {"retained_rank", sol.retained_rank},
                 {"unique_strings", unique},
                 {"backend_calls", backend->call_count()}};
  if (auto* sampled = dynamic_cast<SampledBackend*>(backend.get())) {
    result["measurement_settings"] = sampled->settings_used();
    result["shots_per_setting"] = sampled->model().shots_per_setting;
  }
  if (h.n_qubits() <= kDenseLimit) {
    const auto ground = oracle::exact_ground(h);
    result["exact_ground_energy"] = ground.energy;
    if (auto psi = dense_state(state)) result["fidelity"] = fidelity(ground.vector, basis, sol.alpha, *psi);
  }
  result["solution"] = io::to_json(sol);
  out.document["results"].push_back(result);

  out.columns = {"K", "energy", "delta", "basis_size", "retained_rank"};
  for (const auto& rec : sol.trace) {
    out.rows.push_back({rec.K, rec.energy, maybe(rec.delta), rec.basis_size, rec.retained_rank});
  }
  out.summary = "solve: energy " + json(sol.energy).dump() + " with " + std::to_string(basis.size()) + " basis states";
}

inline void run_sweep(const RunConfig& cfg, RunResult& out) {
  const PauliHamiltonian h = models::build_model(cfg.model);
  if (!cfg.model.parameters.contains(cfg.mode.parameter)) {
    throw ConfigError("mode.parameter '" + cfg.mode.parameter + "' is not set in [model]");
  }
  const ReferenceState state = make_state(cfg.state, h);
  std::shared_ptr<ExpectationBackend> backend;

  OverlapSet set;
  if (cfg.mode.overlap_in) {
    std::ifstream in(*cfg.mode.overlap_in);
    if (!in) throw ConfigError("mode.overlap_in: cannot read '" + *cfg.mode.overlap_in + "'");
    set = io::overlap_from_json(json::parse(in));
  } else {
    backend = make_backend(cfg.backend, state, cfg.state.statevector_limit);
    set = assemble(make_basis(cfg, h, cfg.solver.K_max), h, *backend);
  }
  if (cfg.mode.overlap_out) write_atomic(*cfg.mode.overlap_out, io::to_json(set).dump());

  const std::size_t calls_before = backend ? backend->call_count() : 0;
  std::vector<std::vector<double>> grid;
  std::vector<PauliHamiltonian> points;
  for (double v : cfg.mode.values) {
    models::ModelSpec spec = cfg.model;
    spec.parameters[cfg.mode.parameter] = v;
    points.push_back(models::build_model(spec));
    try {
      grid.push_back(points.back().coefficients_on(set.hamiltonian));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("mode.values: " + std::string(e.what()));
    }
  }
  const auto solutions = sweep(set, grid, cfg.solver);
  const std::size_t calls_after = backend ? backend->call_count() : 0;

  std::optional<StateVector> psi;
  if (!cfg.mode.overlap_in && h.n_qubits() <= kDenseLimit) psi = dense_state(state);

  const bool dense = h.n_qubits() <= kDenseLimit;
  out.columns = {cfg.mode.parameter, "energy"};
  if (dense) out.columns.push_back("exact_energy");
  if (psi) out.columns.push_back("fidelity");
  out.columns.push_back("retained_rank");
  json rows = json::array();
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    std::optional<double> exact;
    std::optional<double> fid;
    std::vector<json> csv{cfg.mode.values[i], solutions[i].energy};
    if (dense) {
      const auto ground = oracle::exact_ground(points[i]);
      exact = ground.energy;
      csv.push_back(*exact);
      if (psi) {
        fid = fidelity(ground.vector, set.basis, solutions[i].alpha, *psi);
        csv.push_back(*fid);
      }
    }
    csv.push_back(solutions[i].retained_rank);
    out.rows.push_back(std::move(csv));
    json row = {{cfg.mode.parameter, cfg.mode.values[i]},
                {"energy", solutions[i].energy},
                {"retained_rank", solutions[i].retained_rank}};
    if (exact) row["exact_energy"] = *exact;
    if (fid) row["fidelity"] = *fid;
    rows.push_back(row);
  }
  json result = {{"basis_size", set.basis.size()},
                 {"unique_strings", set.cache.size()},
                 {"backend_calls_during_sweep", calls_after - calls_before},
                 {"provenance", set.provenance},
                 {"points", rows}};
  if (auto* sampled = dynamic_cast<SampledBackend*>(backend.get())) {
    result["measurement_settings"] = sampled->settings_used();
    result["shots_per_setting"] = sampled->model().shots_per_setting;
  }
  out.document["results"].push_back(result);
  out.summary = "sweep: " + std::to_string(solutions.size()) + " points over " + cfg.mode.parameter + ", basis size " +
                std::to_string(set.basis.size());
}

inline void run_compare_ite(const RunConfig& cfg, RunResult& out) {
  const PauliHamiltonian h = models::build_model(cfg.model);
  if (h.n_qubits() > kDenseLimit) throw ConfigError("compare-ite needs N <= 12");
  const ReferenceState state = make_state(cfg.state, h);
  auto backend = make_backend(cfg.backend, state, cfg.state.statevector_limit);
  const GroundStateSolution sol = iterate(h, *backend, cfg.solver);
  const auto ground = oracle::exact_ground(h);
  const oracle::Matrix H = oracle::dense_hamiltonian(h);
  const oracle::Vector psi0 = oracle::to_vector(state.statevector());

  out.columns = {"tau", "ite_energy", "ite_ground_population", "iqae_energy", "exact_energy"};
  json rows = json::array();
  for (double tau : cfg.mode.taus) {
    const oracle::Vector v = oracle::ite_evolve(h, psi0, tau);
    const double e = oracle::energy(H, v);
    const double pop = std::norm(ground.vector.dot(v));
    out.rows.push_back({tau, e, pop, sol.energy, ground.energy});
    rows.push_back({{"tau", tau}, {"ite_energy", e}, {"ite_ground_population", pop}});
  }
  out.document["results"].push_back({{"exact_energy", ground.energy},
                                     {"iqae", io::to_json(sol)},
                                     {"ite", rows}});
  out.summary = "compare-ite: IQAE " + json(sol.energy).dump() + ", exact " + json(ground.energy).dump();
}

inline void run_moments(const RunConfig& cfg, RunResult& out) {
  const PauliHamiltonian h = models::build_model(cfg.model);
  const ReferenceState state = make_state(cfg.state, h);
  auto backend = make_backend(cfg.backend, state, cfg.state.statevector_limit);
  const bool dense = h.n_qubits() <= kDenseLimit;
  std::optional<double> exact;
  std::optional<oracle::Vector> psi0;
  if (dense) {
    exact = oracle::exact_ground(h).energy;
    psi0 = oracle::to_vector(state.statevector());
  }
  out.columns = {"K", "basis_size", "energy", "krylov_energy", "exact_energy"};
  json rows = json::array();
  for (std::size_t K : cfg.mode.K_values) {
    const MomentBasis basis = make_basis(cfg, h, K);
    const OverlapSet set = assemble(basis, h, *backend, {.factored = false});
    const GroundStateSolution sol = solve(*set.D_fixed, set.E, cfg.solver, set.exact);
    std::optional<double> krylov;
    if (psi0) krylov = oracle::krylov_power_solve(h, *psi0, K, cfg.solver.reg_for(true)).energy;
    out.rows.push_back({K, basis.size(), sol.energy, maybe(krylov), maybe(exact)});
    json row = {{"K", K}, {"basis_size", basis.size()}, {"energy", sol.energy}, {"retained_rank", sol.retained_rank}};
    if (krylov) row["krylov_energy"] = *krylov;
    rows.push_back(row);
  }
  json result = {{"moments", rows}};
  if (exact) result["exact_energy"] = *exact;
  out.document["results"].push_back(result);
  out.summary = "moments: " + std::to_string(cfg.mode.K_values.size()) + " levels";
}

inline void run_bench(const RunConfig& cfg, RunResult& out) {
  out.columns = {"N", "M", "energy", "delta_to_exhaustive"};
  if (cfg.output.timing) out.columns.push_back("wall_time_ms");
  const std::size_t m_max = std::size_t{1} << cfg.mode.r;
  SolverConfig solver = cfg.solver;
  solver.cap = cfg.solver.cap.value_or(m_max);
  for (std::size_t N : cfg.mode.N_list) {
    const auto t0 = Clock::now();
    const PauliHamiltonian h = models::random_pauli(N, cfg.mode.r, cfg.mode.seed);
    const ReferenceState state = ReferenceState::basis_state(N);
    ProductBackend backend(state);
    const MomentBasis basis = MomentBasis::build(h.generators(), cfg.mode.r, solver.cap);
    const OverlapSet set = assemble(basis, h, backend, {.factored = false});
    std::vector<std::size_t> sizes = cfg.mode.M_list;
    if (sizes.empty()) {
      for (std::size_t m = 1; m <= basis.size(); ++m) sizes.push_back(m);
    }
    for (auto& m : sizes) m = std::min(m, basis.size());
    const auto solutions = solve_prefixes(set, sizes, solver);
    const double exhaustive = solve(*set.D_fixed, set.E, solver, true).energy;
    const double elapsed = ms_since(t0);

    json rows = json::array();
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const double gap = solutions[i].energy - exhaustive;
      std::vector<json> row{N, sizes[i], solutions[i].energy, gap};
      if (cfg.output.timing) row.push_back(elapsed);
      out.rows.push_back(row);
      rows.push_back({{"M", sizes[i]}, {"energy", solutions[i].energy}, {"delta_to_exhaustive", gap}});
    }
    json result = {{"N", N},
                   {"r", cfg.mode.r},
                   {"basis_size", basis.size()},
                   {"closure_order", basis.closure_order() ? json(*basis.closure_order()) : json(nullptr)},
                   {"exhaustive_energy", exhaustive},
                   {"prefixes", rows}};
    if (N <= kDenseLimit) {
      result["exact_ground_energy"] = oracle::exact_ground(h).energy;
      result["reachable_ground_energy"] = oracle::reachable_ground_energy(h);
    }
    if (cfg.output.timing) result["wall_time_ms"] = elapsed;
    out.document["results"].push_back(result);
  }
  out.summary = "bench: " + std::to_string(cfg.mode.N_list.size()) + " sizes, r = " + std::to_string(cfg.mode.r);
}

}  // namespace detail

inline json versions() {
  return {{"iqae", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

/// Runs the configured mode. Numerical failures surface as NumericalError.
inline RunResult execute(const RunConfig& cfg) {
  const auto t0 = detail::Clock::now();
  RunResult out;
  out.document = {{"config_echo", echo(cfg.raw)}, {"results", json::array()}, {"versions", versions()}};
  if (cfg.mode.kind == "solve") detail::run_solve(cfg, out);
  else if (cfg.mode.kind == "sweep") detail::run_sweep(cfg, out);
  else if (cfg.mode.kind == "compare-ite") detail::run_compare_ite(cfg, out);
  else if (cfg.mode.kind == "moments") detail::run_moments(cfg, out);
  else detail::run_bench(cfg, out);
  out.document["wall_time_ms"] = cfg.output.timing ? json(detail::ms_since(t0)) : json(nullptr);
  return out;
}

inline std::string render(const RunResult& r, const std::string& format) {
  if (format == "json") return r.document.dump(2) + "\n";
  std::string text;
  for (std::size_t i = 0; i < r.columns.size(); ++i) text += (i ? "," : "") + r.columns[i];
  text += "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + detail::csv_cell(row[i]);
    text += "\n";
  }
  return text;
}

/// execute + render + atomic write.
inline RunResult run(const RunConfig& cfg) {
  RunResult r = execute(cfg);
  detail::write_atomic(cfg.output.path, render(r, cfg.output.format));
  return r;
}

}  // namespace iqae
