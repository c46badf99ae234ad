#include "entsym/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace entsym::io {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

Complex read_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(path + ": complex entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<int> read_dims(const json& j, const std::string& path) {
  if (!j.contains("dims") || !j["dims"].is_array())
    throw ParseError(path + ": missing \"dims\" array");
  std::vector<int> dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer()) throw ParseError(path + ": dims must be integers");
    dims.push_back(d.get<int>());
  }
  return dims;
}

Matrix read_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path + ": matrix must be a nonempty array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ParseError(path + ": matrix rows must be nonempty arrays");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ParseError(path + ": ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = read_complex(j[r][c], path);
  }
  return m;
}

void write_complex(std::ostream& os, const Complex& v) {
  os << '[' << format_double(v.real()) << ", " << format_double(v.imag()) << ']';
}

void write_matrix(std::ostream& os, const Matrix& m, const std::string& indent) {
  os << "[\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << indent << "  [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ", ";
      write_complex(os, m(r, c));
    }
    os << ']' << (r + 1 < m.rows() ? ",\n" : "\n");
  }
  os << indent << ']';
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << body;
  if (!out) throw IoError("write failed for " + path);
}

} // namespace

PureState load_state(const std::string& path) {
  const json j = parse_file(path);
  const auto dims = read_dims(j, path);
  if (!j.contains("amplitudes") || !j["amplitudes"].is_array())
    throw ParseError(path + ": missing \"amplitudes\" array");
  Vector amps(j["amplitudes"].size());
  for (std::size_t i = 0; i < j["amplitudes"].size(); ++i)
    amps(static_cast<Eigen::Index>(i)) = read_complex(j["amplitudes"][i], path);
  try {
    return make_pure_state(amps, dims);
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

DensityMatrix load_density(const std::string& path) {
  const json j = parse_file(path);
  const auto dims = read_dims(j, path);
  if (!j.contains("matrix")) throw ParseError(path + ": missing \"matrix\"");
  try {
    return make_density(read_matrix(j["matrix"], path), dims);
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

StateFile load_state_file(const std::string& path) {
  const json j = parse_file(path);
  if (j.contains("amplitudes")) return load_state(path);
  if (j.contains("matrix")) return load_density(path);
  throw ParseError(path + ": expected \"amplitudes\" or \"matrix\"");
}

Matrix load_operator(const std::string& path) {
  const json j = parse_file(path);
  if (!j.contains("matrix")) throw ParseError(path + ": missing \"matrix\"");
  return read_matrix(j["matrix"], path);
}

KrausMap load_kraus(const std::string& path) {
  const json j = parse_file(path);
  if (!j.contains("ops") || !j["ops"].is_array() || j["ops"].empty())
    throw ParseError(path + ": missing nonempty \"ops\" array");
  std::vector<Matrix> ops;
  for (const auto& op : j["ops"]) ops.push_back(read_matrix(op, path));
  KrausMap map;
  try {
    map = make_kraus(std::move(ops));
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (j.contains("in_dim") && j["in_dim"].get<int>() != map.in_dim)
    throw ParseError(path + ": in_dim does not match operator shape");
  if (j.contains("out_dim") && j["out_dim"].get<int>() != map.out_dim)
    throw ParseError(path + ": out_dim does not match operator shape");
  return map;
}

void save_state(const std::string& path, const PureState& state) {
  std::ostringstream os;
  os << "{\n  \"dims\": [";
  for (std::size_t i = 0; i < state.dims.size(); ++i)
    os << (i ? ", " : "") << state.dims[i];
  os << "],\n  \"amplitudes\": [";
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    if (i) os << ", ";
    write_complex(os, state.amplitudes(i));
  }
  os << "]\n}\n";
  write_file(path, os.str());
}

void save_density(const std::string& path, const DensityMatrix& rho) {
  std::ostringstream os;
  os << "{\n  \"dims\": [";
  for (std::size_t i = 0; i < rho.dims.size(); ++i) os << (i ? ", " : "") << rho.dims[i];
  os << "],\n  \"matrix\": ";
  write_matrix(os, rho.matrix, "  ");
  os << "\n}\n";
  write_file(path, os.str());
}

void save_operator(const std::string& path, const Matrix& m) {
  std::ostringstream os;
  os << "{\n  \"rows\": " << m.rows() << ",\n  \"cols\": " << m.cols()
     << ",\n  \"matrix\": ";
  write_matrix(os, m, "  ");
  os << "\n}\n";
  write_file(path, os.str());
}

void save_kraus(const std::string& path, const KrausMap& map) {
  std::ostringstream os;
  os << "{\n  \"in_dim\": " << map.in_dim << ",\n  \"out_dim\": " << map.out_dim
     << ",\n  \"ops\": [\n";
  for (std::size_t l = 0; l < map.ops.size(); ++l) {
    os << "    ";
    write_matrix(os, map.ops[l], "    ");
    os << (l + 1 < map.ops.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  write_file(path, os.str());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace entsym::io
