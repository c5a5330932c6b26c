#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "subspace/model.hpp"
#include "subspace/msap_lab.hpp"

namespace subspace::io {

using json = nlohmann::json;

/// Parses one CSV cell: a plain real ("1.5", "-2e-3") or a complex scalar
/// written as "a+bi", "a-bi", "bi" or "i".
Complex parse_scalar(const std::string& cell);

/// CSV rows are data vectors; lines starting with '#' are ignored. Errors
/// carry the offending row (and cell) location.
DataSet parse_dataset_text(const std::string& text, const std::string& label = {});
DataSet parse_dataset(const std::string& path);

/// Stable report schema; complex numbers serialize as [re, im] pairs and a
/// basis as a list of columns. An empty timestamp omits the field.
json report_to_json(const FitReport& report, const std::string& timestamp = {});
FitReport report_from_json(const json& j);
std::variant<std::monostate, UnionModel, FiberedModel> model_from_json(const json& j);

json scan_to_json(const lab::AttainmentScan& scan);
json trace_to_json(const lab::WeakConvergenceTrace& trace);

std::string scan_to_csv(const lab::AttainmentScan& scan);     // parameter,cost
std::string trace_to_csv(const lab::WeakConvergenceTrace& trace);  // index,residual
std::string fit_trace_to_csv(const FitReport& report);        // iteration,cost

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace subspace::io
