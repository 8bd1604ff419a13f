#include "lotwassmap/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace lotwassmap::io {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

namespace {

double parse_field(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double value = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    std::ostringstream msg;
    msg << "csv line " << line << ": cannot parse '" << field << "' as a number";
    throw Error(msg.str());
  }
  return value;
}

}  // namespace

Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_field(rest.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << "csv line " << line_no << ": expected " << rows.front().size() << " fields, got "
          << row.size();
      throw Error(msg.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("csv: no data rows");
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < out.rows(); ++i) {
    for (Index j = 0; j < out.cols(); ++j) {
      out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return out;
}

void write_measure_csv(std::ostream& out, const EmpiricalMeasure& mu, WeightColumn weights) {
  if (weights == WeightColumn::Absent) {
    write_matrix_csv(out, mu.points());
    return;
  }
  Matrix m(mu.size(), mu.dim() + 1);
  m.leftCols(mu.dim()) = mu.points();
  m.col(mu.dim()) = mu.weights();
  write_matrix_csv(out, m);
}

EmpiricalMeasure read_measure_csv(std::istream& in, WeightColumn weights) {
  Matrix m = read_matrix_csv(in);
  if (weights == WeightColumn::Absent) return EmpiricalMeasure(std::move(m));
  if (m.cols() < 2) throw Error("measure csv: weighted rows need a coordinate and a weight");
  Vector w = m.col(m.cols() - 1);
  const double total = w.sum();
  // Serialized weights lose a few ulps; renormalize within the solver's band.
  if (std::abs(total - 1.0) <= 1e-9) w /= total;
  return EmpiricalMeasure(Matrix(m.leftCols(m.cols() - 1)), std::move(w));
}

EmpiricalMeasure read_measure_csv(const std::filesystem::path& path, WeightColumn weights) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return read_measure_csv(in, weights);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_plan_csv(std::ostream& out, const TransportPlan& plan) {
  for (Index i = 0; i < plan.mass.rows(); ++i) {
    for (Index j = 0; j < plan.mass.cols(); ++j) {
      const double v = plan.mass(i, j);
      if (v > 0.0) out << i << ',' << j << ',' << format_double(v) << '\n';
    }
  }
}

void write_map_csv(std::ostream& out, const TransportMap& map) { write_matrix_csv(out, map.values); }

void write_embedding_csv(std::ostream& out, const EmbeddingResult& result) {
  write_matrix_csv(out, result.coordinates);
}

nlohmann::json embedding_sidecar(const EmbeddingResult& result) {
  nlohmann::json sv = nlohmann::json::array();
  for (Index i = 0; i < result.singular_values.size(); ++i) sv.push_back(result.singular_values(i));
  const PipelineMetrics& m = result.metrics;
  return {{"method", result.method},
          {"singular_values", sv},
          {"negative_eigenvalue_mass", result.negative_eigenvalue_mass},
          {"ot_solve_count", m.ot_solve_count},
          {"sinkhorn_iterations", m.sinkhorn_iterations},
          {"unconverged_solves", m.unconverged_solves},
          {"timings",
           {{"solve_seconds", m.solve_seconds},
            {"assemble_seconds", m.assemble_seconds},
            {"spectral_seconds", m.spectral_seconds},
            {"total_seconds", m.total_seconds}}}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace lotwassmap::io
