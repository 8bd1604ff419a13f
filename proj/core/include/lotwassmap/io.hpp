#pragma once

#include "lotwassmap/common.hpp"
#include "lotwassmap/embedding.hpp"
#include "lotwassmap/lot.hpp"
#include "lotwassmap/measures.hpp"
#include "lotwassmap/ot.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace lotwassmap::io {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

/// Comma-separated rows, no header.
void write_matrix_csv(std::ostream& out, const Matrix& m);
Matrix read_matrix_csv(std::istream& in);

enum class WeightColumn { Absent, Present };

/// One point per row; with WeightColumn::Present the final column holds the weight.
void write_measure_csv(std::ostream& out, const EmpiricalMeasure& mu, WeightColumn weights);
EmpiricalMeasure read_measure_csv(std::istream& in, WeightColumn weights);
EmpiricalMeasure read_measure_csv(const std::filesystem::path& path, WeightColumn weights);

/// (row, col, mass) triplets for entries with mass > 0.
void write_plan_csv(std::ostream& out, const TransportPlan& plan);

void write_map_csv(std::ostream& out, const TransportMap& map);

void write_embedding_csv(std::ostream& out, const EmbeddingResult& result);
/// Singular values, negative eigenvalue mass, solve counts and timings.
nlohmann::json embedding_sidecar(const EmbeddingResult& result);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace lotwassmap::io
