#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "gfrob/estimate.hpp"
#include "gfrob/train.hpp"

namespace gfrob::io {

using json = nlohmann::json;

/// A matrix read from disk, field decided by the file.
using AnyMatrix = std::variant<RealMatrix, ComplexMatrix>;

Field field_of_any(const AnyMatrix& m);

/// Real scalars as numbers, complex scalars as [re, im].
template <Scalar T>
json scalar_to_json(T x);

/// {"rows", "cols", "field", "data"} with data flattened row-major.
template <Scalar T>
json matrix_to_json(const Matrix<T>& m);

/// Parses the matrix object; FormatError on any schema violation.
AnyMatrix matrix_from_json(const json& j);

/// Converts to the requested field. Real data promotes to complex; complex
/// data never demotes (FieldError).
template <Scalar T>
Matrix<T> as_field(const AnyMatrix& m);

/// Whole-file JSON parse. IoError when unreadable, FormatError naming the file
/// when malformed.
json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

AnyMatrix read_matrix(const std::filesystem::path& path);
template <Scalar T>
void write_matrix(const std::filesystem::path& path, const Matrix<T>& m);

/// {"inputs": matrix, "targets": matrix}, both real.
json dataset_to_json(const Dataset& d);
Dataset dataset_from_json(const json& j);
Dataset read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const Dataset& d);

/// {estimate, exact, sample_count, standard_error, seed, law, z_score}.
template <Scalar T>
json report_to_json(const EstimateReport<T>& r);

/// `iter,risk,grad_norm,step` rows with round-trip precision.
std::string run_csv(const RunRecord& r);

/// Writes PREFIX.csv and PREFIX.json (the config echo plus run summary).
void write_run(const std::string& prefix, const RunRecord& r, const json& config);

/// A persisted run read back from PREFIX.csv / PREFIX.json.
struct StoredRun {
    std::string prefix;
    std::vector<RunRow> rows;
    json meta;
};

StoredRun read_run(const std::string& prefix);

}  // namespace gfrob::io
