#include "subspace/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace subspace::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin + s.size()) return false;
  out = value;
  return true;
}

std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw input_error("report: complex entries must be [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json basis_to_json(const Matrix& basis) {
  json columns = json::array();
  for (std::size_t c = 0; c < basis.cols(); ++c) {
    json column = json::array();
    for (std::size_t i = 0; i < basis.rows(); ++i) column.push_back(complex_to_json(basis(i, c)));
    columns.push_back(std::move(column));
  }
  return columns;
}

Matrix basis_from_json(const json& j, std::size_t rows) {
  std::vector<Vector> columns;
  for (const json& column : j) {
    Vector v;
    v.reserve(column.size());
    for (const json& entry : column) v.push_back(complex_from_json(entry));
    if (v.size() != rows) throw input_error("report: basis column has the wrong dimension");
    columns.push_back(std::move(v));
  }
  return Matrix::from_columns(rows, columns);
}

}  // namespace

Complex parse_scalar(const std::string& cell) {
  const std::string s = trim(cell);
  if (s.empty()) throw input_error("empty scalar");

  double re = 0.0;
  if (parse_real(s, re)) return Complex(re, 0.0);

  if (s.back() != 'i' && s.back() != 'I') throw input_error("cannot parse scalar");
  const std::string body = s.substr(0, s.size() - 1);

  // split into real part and imaginary coefficient at the last sign that is
  // not an exponent sign and not leading
  std::size_t split = std::string::npos;
  for (std::size_t pos = body.size(); pos-- > 1;) {
    const char c = body[pos];
    if ((c == '+' || c == '-') && body[pos - 1] != 'e' && body[pos - 1] != 'E') {
      split = pos;
      break;
    }
  }

  std::string real_part;
  std::string imag_part;
  if (split == std::string::npos) {
    imag_part = body;
  } else {
    real_part = body.substr(0, split);
    imag_part = body.substr(split);
  }

  if (!real_part.empty()) {
    if (!parse_real(real_part, re)) throw input_error("cannot parse scalar");
  }
  double im = 0.0;
  if (imag_part.empty() || imag_part == "+") {
    im = 1.0;
  } else if (imag_part == "-") {
    im = -1.0;
  } else if (!parse_real(imag_part, im)) {
    throw input_error("cannot parse scalar");
  }
  return Complex(re, im);
}

DataSet parse_dataset_text(const std::string& text, const std::string& label) {
  std::istringstream stream(text);
  std::string line;
  std::vector<Vector> vectors;
  std::size_t expected_width = 0;
  std::size_t line_number = 0;

  while (std::getline(stream, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;

    Vector row;
    std::size_t column = 0;
    std::size_t begin = 0;
    for (;;) {
      const std::size_t comma = stripped.find(',', begin);
      const std::string cell = stripped.substr(begin, comma - begin);
      ++column;
      try {
        row.push_back(parse_scalar(cell));
      } catch (const input_error&) {
        throw input_error("csv row " + std::to_string(line_number) + ", column " +
                          std::to_string(column) + ": cannot parse '" + trim(cell) + "'");
      }
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }

    if (expected_width == 0) {
      expected_width = row.size();
    } else if (row.size() != expected_width) {
      throw input_error("csv row " + std::to_string(line_number) + ": expected " +
                        std::to_string(expected_width) + " entries, got " +
                        std::to_string(row.size()));
    }
    vectors.push_back(std::move(row));
  }

  if (vectors.empty()) throw input_error("csv: no data rows");
  return DataSet(std::move(vectors), label);
}

DataSet parse_dataset(const std::string& path) {
  return parse_dataset_text(read_file(path), path);
}

json report_to_json(const FitReport& report, const std::string& timestamp) {
  json model;
  if (std::holds_alternative<std::monostate>(report.model))
    throw input_error("report: missing model");
  if (const auto* u = std::get_if<UnionModel>(&report.model)) {
    model["type"] = "union";
    model["dimension"] = u->ambient_dimension();
    model["rank_bound"] = u->rank_bound();
    json bases = json::array();
    for (const Subspace& v : u->subspaces()) bases.push_back(basis_to_json(v.basis()));
    model["bases"] = std::move(bases);
  } else {
    const auto& f = std::get<FiberedModel>(report.model);
    model["type"] = "invariant";
    model["group"] = {{"p", f.action().group_order}, {"q", f.action().block_size}};
    model["pidim_bound"] = f.pidim_bound();
    json bases = json::array();
    for (const Subspace& v : f.fibers()) bases.push_back(basis_to_json(v.basis()));
    model["bases"] = std::move(bases);
  }

  json j;
  j["cost"] = report.cost;
  j["model"] = std::move(model);
  j["partition"] = report.partition.assignment;
  j["iterations"] = report.iterations;
  j["restarts_used"] = report.restarts_used;
  j["seed"] = report.seed;
  j["converged"] = report.converged;
  j["trace"] = report.trace;
  j["warnings"] = report.warnings;
  if (!timestamp.empty()) j["timestamp"] = timestamp;
  return j;
}

std::variant<std::monostate, UnionModel, FiberedModel> model_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "union") {
    const std::size_t d = j.at("dimension").get<std::size_t>();
    const std::size_t rank_bound = j.at("rank_bound").get<std::size_t>();
    std::vector<Subspace> subspaces;
    for (const json& basis : j.at("bases")) subspaces.emplace_back(d, basis_from_json(basis, d));
    return UnionModel(std::move(subspaces), rank_bound);
  }
  if (type == "invariant") {
    CyclicAction action{j.at("group").at("p").get<std::size_t>(),
                        j.at("group").at("q").get<std::size_t>()};
    const std::size_t pidim = j.at("pidim_bound").get<std::size_t>();
    std::vector<Subspace> fibers;
    for (const json& basis : j.at("bases"))
      fibers.emplace_back(action.block_size, basis_from_json(basis, action.block_size));
    return FiberedModel(action, std::move(fibers), pidim);
  }
  throw input_error("report: unknown model type '" + type + "'");
}

FitReport report_from_json(const json& j) {
  FitReport report;
  report.cost = j.at("cost").get<double>();
  report.model = model_from_json(j.at("model"));
  report.partition.assignment = j.at("partition").get<std::vector<std::size_t>>();
  report.iterations = j.at("iterations").get<int>();
  report.restarts_used = j.at("restarts_used").get<int>();
  report.seed = j.at("seed").get<std::uint64_t>();
  report.converged = j.at("converged").get<bool>();
  report.trace = j.at("trace").get<std::vector<double>>();
  report.warnings = j.at("warnings").get<std::vector<std::string>>();
  return report;
}

json scan_to_json(const lab::AttainmentScan& scan) {
  json j;
  j["family"] = scan.family;
  j["parameters"] = scan.parameters;
  j["costs"] = scan.costs;
  j["infimum_estimate"] = scan.infimum_estimate;
  json attained = json::array();
  for (const auto& [parameter, cost] : scan.attained)
    attained.push_back(json::array({parameter, cost}));
  j["attained"] = std::move(attained);
  if (scan.external_minimizer_cost) {
    j["external_minimizer_cost"] = *scan.external_minimizer_cost;
  } else {
    j["external_minimizer_cost"] = nullptr;
  }
  return j;
}

json trace_to_json(const lab::WeakConvergenceTrace& trace) {
  json j;
  j["truncation"] = trace.truncation;
  j["indices"] = trace.indices;
  j["probe_residuals"] = trace.probe_residuals;
  j["psd_gaps"] = trace.psd_gaps;
  j["diagonal_gaps"] = trace.diagonal_gaps;
  j["split_residuals"] = trace.split_residuals;
  j["coupled_split_residuals"] = trace.coupled_split_residuals;
  return j;
}

std::string scan_to_csv(const lab::AttainmentScan& scan) {
  std::string out = "parameter,cost\n";
  for (std::size_t i = 0; i < scan.parameters.size(); ++i)
    out += format_double(scan.parameters[i]) + "," + format_double(scan.costs[i]) + "\n";
  return out;
}

std::string trace_to_csv(const lab::WeakConvergenceTrace& trace) {
  std::string out = "index,residual\n";
  for (std::size_t i = 0; i < trace.indices.size(); ++i)
    out += std::to_string(trace.indices[i]) + "," + format_double(trace.probe_residuals[i]) + "\n";
  return out;
}

std::string fit_trace_to_csv(const FitReport& report) {
  std::string out = "iteration,cost\n";
  for (std::size_t i = 0; i < report.trace.size(); ++i)
    out += std::to_string(i + 1) + "," + format_double(report.trace[i]) + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw input_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw input_error("cannot write file: " + path);
  stream << content;
  if (!stream) throw input_error("write failed: " + path);
}

}  // namespace subspace::io
