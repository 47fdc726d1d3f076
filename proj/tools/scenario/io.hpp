#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "biham/spectral.hpp"
#include "biham/types.hpp"

namespace biham::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"n": int, "re": [[...]], "im": [[...]]}, row-major. Assumes the object
/// already passed schema validation.
[[nodiscard]] NhMatrix matrix_from_json(const nlohmann::json& j);

/// {"re": [...], "im": [...]}.
[[nodiscard]] CVector vector_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json complex_fields(const std::string& key, Complex value);
void put_complex(nlohmann::json& obj, const std::string& key, Complex value);
void put_complex_vector(nlohmann::json& obj, const std::string& key, const CVector& v);
void put_complex_matrix(nlohmann::json& obj, const std::string& key, const CMatrix& m);

[[nodiscard]] nlohmann::json decomposition_report(const NhMatrix& h, const BiorthogonalSystem& sys);

/// Shortest round-trip decimal for a double ("%.17g").
[[nodiscard]] std::string format_number(double x);

/// Accumulates rows of a CSV table in memory with a fixed header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& values);
  [[nodiscard]] std::string str() const;
  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string body_;
};

[[nodiscard]] std::string read_file(const std::filesystem::path& path);

/// Writes to `<path>.tmp` then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace biham::cli
