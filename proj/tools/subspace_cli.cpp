#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <string>
#include <vector>

#include "subspace/invariant_fiber.hpp"
#include "subspace/io.hpp"
#include "subspace/msap_lab.hpp"
#include "subspace/union_solver.hpp"

namespace {

using namespace subspace;

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  char buffer[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buffer;
}

int threads_from_env() {
  if (const char* raw = std::getenv("THREADS")) {
    const int t = std::atoi(raw);
    if (t >= 1) return t;
  }
  return 1;
}

// "start:stop:step" or a comma-separated list
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0.0)
      throw input_error("grid: expected start:stop:step with positive step");
    for (double v = start; v <= stop + 1e-9 * step; v += step) out.push_back(v);
    return out;
  }
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t comma = text.find(',', begin);
    const std::string cell = text.substr(begin, comma - begin);
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw input_error("grid: cannot parse '" + cell + "'");
    }
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return out;
}

std::vector<std::size_t> to_index_list(const std::vector<double>& grid) {
  std::vector<std::size_t> out;
  out.reserve(grid.size());
  for (double v : grid) {
    if (v < 0.0) throw input_error("grid: indices must be non-negative");
    out.push_back(static_cast<std::size_t>(v + 0.5));
  }
  return out;
}

void emit_json(const io::json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    io::write_file(out_path, text);
  }
}

void emit_report(const FitReport& report, const std::string& out_path, bool no_timestamp,
                 const std::string& csv_path) {
  emit_json(io::report_to_json(report, no_timestamp ? std::string{} : utc_timestamp()), out_path);
  if (!csv_path.empty()) io::write_file(csv_path, io::fit_trace_to_csv(report));
}

// Cross-checks the fitted cost through the projector functional; a residue in
// the imaginary part measures numerical asymmetry and lands in the warnings.
void append_phi_diagnostics(FitReport& report, const DataSet& data) {
  double residue = 0.0;
  if (const auto* u = std::get_if<UnionModel>(&report.model)) {
    for (std::size_t j = 0; j < u->count(); ++j) {
      std::vector<Vector> block;
      for (std::size_t i = 0; i < data.size(); ++i)
        if (report.partition.assignment[i] == j) block.push_back(data.vectors()[i]);
      if (block.empty()) continue;
      double imag = 0.0;
      phi(DataSet(block), complement_projector(u->subspaces()[j].projector()), imag);
      residue += imag;
    }
  } else if (const auto* fibered = std::get_if<FiberedModel>(&report.model)) {
    const FiberData fibers = fiber_decompose(data, fibered->action());
    for (std::size_t chi = 0; chi < fibered->action().group_order; ++chi) {
      double imag = 0.0;
      phi(fibers.fibers[chi], complement_projector(fibered->fibers()[chi].projector()), imag);
      residue += imag;
    }
  }
  if (residue > 1e-10 * data.energy()) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.3e", residue);
    report.warnings.push_back(std::string("phi imaginary residue ") + buffer +
                              " exceeds 1e-10 * alpha");
  }
}

double rescore(const FitReport& report, const DataSet& data) {
  if (const auto* u = std::get_if<UnionModel>(&report.model)) return cost_union(data, *u);
  const auto& fibered = std::get<FiberedModel>(report.model);
  const FiberData fibers = fiber_decompose(data, fibered.action());
  double cost = 0.0;
  for (std::size_t chi = 0; chi < fibered.action().group_order; ++chi)
    cost += cost_single(fibers.fibers[chi], fibered.fibers()[chi]);
  return cost;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-squares subspace model fitting: single subspaces, unions of subspaces "
               "and shift-invariant subspace models, plus attainment diagnostics."};
  app.require_subcommand(1);

  std::string input;
  std::string out_path;
  std::string csv_path;
  bool no_timestamp = false;
  std::size_t rank = 1;

  auto add_output_flags = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "write the JSON report to this path (default: stdout)");
    cmd->add_option("--csv", csv_path, "also write a plot-ready CSV to this path");
    cmd->add_flag("--no-timestamp", no_timestamp, "omit the timestamp field");
  };

  CLI::App* fit_single = app.add_subcommand("fit-single", "fit one subspace of bounded dimension");
  fit_single->add_option("--input", input, "CSV data file, rows are vectors")->required();
  fit_single->add_option("--rank", rank, "dimension bound")->required();
  add_output_flags(fit_single);

  std::size_t count = 2;
  SolverConfig cfg;
  bool exhaustive = false;
  CLI::App* fit_union = app.add_subcommand("fit-union", "fit a union of subspaces");
  fit_union->add_option("--input", input, "CSV data file, rows are vectors")->required();
  fit_union->add_option("--rank", rank, "per-subspace dimension bound")->required();
  fit_union->add_option("--count", count, "number of subspaces")->required();
  fit_union->add_option("--restarts", cfg.restarts, "restarts of the alternating solver");
  fit_union->add_option("--max-iters", cfg.max_iters, "iteration cap per restart");
  fit_union->add_option("--seed", cfg.seed, "random seed");
  fit_union->add_flag("--exhaustive", exhaustive, "use the exact partition-enumeration solver");
  fit_union->add_option("--exhaustive-limit", cfg.exhaustive_limit,
                        "point-count cap for the exhaustive solver");
  add_output_flags(fit_union);

  CyclicAction action;
  std::size_t pidim = 1;
  CLI::App* fit_invariant =
      app.add_subcommand("fit-invariant", "fit a shift-invariant subspace model");
  fit_invariant->add_option("--input", input, "CSV data file, rows are vectors")->required();
  fit_invariant->add_option("--group-order", action.group_order, "cyclic group order p")
      ->required();
  fit_invariant->add_option("--block-size", action.block_size, "shift block size q")->required();
  fit_invariant->add_option("--pidim", pidim, "per-fiber dimension bound")->required();
  add_output_flags(fit_invariant);

  std::string demo_name;
  std::string grid_text;
  std::string t_values_text;
  std::size_t truncation = 64;
  std::size_t demo_k = 2;
  std::size_t demo_dim = 4;
  std::uint64_t demo_seed = lab::separation_seed;
  CLI::App* demo = app.add_subcommand("demo", "attainment and weak-convergence diagnostics");
  demo->add_option("--name", demo_name, "lines-plane | weak-limit | rank-closure | msap-separation")
      ->required()
      ->check(CLI::IsMember({"lines-plane", "weak-limit", "rank-closure", "msap-separation"}));
  demo->add_option("--grid", grid_text, "parameter grid, start:stop:step or a comma list");
  demo->add_option("--truncation", truncation, "truncation dimension N");
  demo->add_option("--k", demo_k, "rank / generator count");
  demo->add_option("--t-values", t_values_text, "comma list of weights in [0, 1]");
  demo->add_option("--dim", demo_dim, "ambient dimension for msap-separation");
  demo->add_option("--seed", demo_seed, "seed for the generated family");
  add_output_flags(demo);

  std::string data_path;
  CLI::App* report_cmd = app.add_subcommand("report", "inspect and re-score a report");
  report_cmd->add_option("--input", input, "report JSON file")->required();
  report_cmd->add_option("--data", data_path, "CSV data file to re-score the model against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;  // usage error
  }

  try {
    if (app.got_subcommand(fit_single)) {
      const DataSet data = io::parse_dataset(input);
      const SingleFit fit = best_subspace(data, rank);
      FitReport report;
      report.cost = fit.cost;
      report.model = UnionModel({fit.subspace}, rank);
      report.partition.assignment.assign(data.size(), 0);
      report.iterations = 1;
      report.converged = true;
      report.trace = {fit.cost};
      append_phi_diagnostics(report, data);
      emit_report(report, out_path, no_timestamp, csv_path);
    } else if (app.got_subcommand(fit_union)) {
      const DataSet data = io::parse_dataset(input);
      cfg.threads = threads_from_env();
      FitReport report = exhaustive ? exhaustive_union(data, count, rank, cfg.exhaustive_limit)
                                    : k_subspaces(data, count, rank, cfg);
      append_phi_diagnostics(report, data);
      emit_report(report, out_path, no_timestamp, csv_path);
    } else if (app.got_subcommand(fit_invariant)) {
      const DataSet data = io::parse_dataset(input);
      auto [model, report] = best_invariant(data, action, pidim);
      append_phi_diagnostics(report, data);
      emit_report(report, out_path, no_timestamp, csv_path);
    } else if (app.got_subcommand(demo)) {
      if (demo_name == "lines-plane") {
        const auto grid = parse_grid(grid_text.empty() ? "0:10:0.5" : grid_text);
        const lab::AttainmentScan scan = lab::lines_plane_scan(grid);
        emit_json(io::scan_to_json(scan), out_path);
        if (!csv_path.empty()) io::write_file(csv_path, io::scan_to_csv(scan));
      } else if (demo_name == "weak-limit") {
        const auto indices = to_index_list(parse_grid(grid_text.empty() ? "3:30:1" : grid_text));
        const lab::WeakConvergenceTrace trace = lab::weak_limit_trace(truncation, indices);
        emit_json(io::trace_to_json(trace), out_path);
        if (!csv_path.empty()) io::write_file(csv_path, io::trace_to_csv(trace));
      } else if (demo_name == "rank-closure") {
        std::vector<double> weights;
        if (t_values_text.empty()) {
          weights.assign(demo_k, 0.0);
          for (std::size_t i = 0; i < demo_k; ++i)
            weights[i] = 0.9 - 0.4 * static_cast<double>(i) / std::max<std::size_t>(demo_k - 1, 1);
        } else {
          weights = parse_grid(t_values_text);
        }
        const auto indices = to_index_list(parse_grid(grid_text.empty() ? "1:12:1" : grid_text));
        const lab::WeakConvergenceTrace trace =
            lab::rank_closure_trace(weights.size(), weights, truncation, indices);
        emit_json(io::trace_to_json(trace), out_path);
        if (!csv_path.empty()) io::write_file(csv_path, io::trace_to_csv(trace));
      } else {  // msap-separation
        const auto grid = parse_grid(
            grid_text.empty() ? "1,0.3,0.1,0.03,0.01,0.003,0.001,0.0003,0.0001" : grid_text);
        const lab::AttainmentScan scan = lab::separation_scan(demo_k, demo_dim, grid, demo_seed);
        emit_json(io::scan_to_json(scan), out_path);
        if (!csv_path.empty()) io::write_file(csv_path, io::scan_to_csv(scan));
      }
    } else if (app.got_subcommand(report_cmd)) {
      const FitReport report = io::report_from_json(io::json::parse(io::read_file(input)));
      std::cout << "cost: " << report.cost << "\n";
      if (std::holds_alternative<UnionModel>(report.model)) {
        const auto& u = std::get<UnionModel>(report.model);
        std::cout << "model: union of " << u.count() << " subspace(s) in dimension "
                  << u.ambient_dimension() << "\n";
      } else {
        const auto& f = std::get<FiberedModel>(report.model);
        std::cout << "model: invariant, group order " << f.action().group_order
                  << ", block size " << f.action().block_size << "\n";
      }
      std::cout << "iterations: " << report.iterations << ", converged: "
                << (report.converged ? "yes" : "no") << "\n";
      if (!data_path.empty()) {
        const DataSet data = io::parse_dataset(data_path);
        const double rescored = rescore(report, data);
        std::cout << "re-scored cost: " << rescored << "\n";
        std::cout << "difference: " << std::abs(rescored - report.cost) << "\n";
      }
    }
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const solver_refusal& e) {
    std::cerr << "solver refusal: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
  return 0;
}
