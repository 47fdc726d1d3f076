#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "biham/errors.hpp"

namespace biham::cli {

NhMatrix matrix_from_json(const nlohmann::json& j) {
  const auto n = j.at("n").get<Eigen::Index>();
  CMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      m(r, c) = Complex(j.at("re").at(r).at(c).get<double>(), j.at("im").at(r).at(c).get<double>());
    }
  }
  return NhMatrix(std::move(m));
}

CVector vector_from_json(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  CVector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t k = 0; k < re.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = Complex(re.at(k).get<double>(), im.at(k).get<double>());
  }
  return v;
}

void put_complex(nlohmann::json& obj, const std::string& key, Complex value) {
  obj[key + "_re"] = value.real();
  obj[key + "_im"] = value.imag();
}

nlohmann::json complex_fields(const std::string& key, Complex value) {
  nlohmann::json obj = nlohmann::json::object();
  put_complex(obj, key, value);
  return obj;
}

void put_complex_vector(nlohmann::json& obj, const std::string& key, const CVector& v) {
  auto re = nlohmann::json::array();
  auto im = nlohmann::json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    re.push_back(v(k).real());
    im.push_back(v(k).imag());
  }
  obj[key + "_re"] = std::move(re);
  obj[key + "_im"] = std::move(im);
}

void put_complex_matrix(nlohmann::json& obj, const std::string& key, const CMatrix& m) {
  auto re = nlohmann::json::array();
  auto im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row_re = nlohmann::json::array();
    auto row_im = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row_re.push_back(m(r, c).real());
      row_im.push_back(m(r, c).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  obj[key + "_re"] = std::move(re);
  obj[key + "_im"] = std::move(im);
}

nlohmann::json decomposition_report(const NhMatrix& h, const BiorthogonalSystem& sys) {
  nlohmann::json report = nlohmann::json::object();
  report["n"] = sys.dimension();
  put_complex_vector(report, "eigenvalues", sys.eigenvalues);
  put_complex_matrix(report, "right", sys.right);
  put_complex_matrix(report, "left", sys.left);
  report["condition_number"] = sys.cond;
  report["biorthonormality_residual"] = biorthonormality_residual(sys);
  report["completeness_residual"] = completeness_residual(sys);
  report["right_eigen_residual"] = right_eigen_residual(h, sys);
  report["left_eigen_residual"] = left_eigen_residual(h, sys);
  report["spectrum_is_real"] = spectrum_is_real(sys);
  return report;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) body_ += ',';
    body_ += header[k];
  }
  body_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != columns_) {
    throw Error(ErrorCode::InvalidArgument, "CSV row width does not match header");
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) body_ += ',';
    body_ += format_number(values[k]);
  }
  body_ += '\n';
  ++rows_;
}

std::string CsvTable::str() const { return body_; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace biham::cli
