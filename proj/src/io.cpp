// io.cpp — CSV/file plumbing and the binary matrix dump format.
#include "srpt/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <unistd.h>

namespace srpt::io {
namespace {

constexpr std::uint64_t kMagic = 0x0054414D54505253ull;  // "SRPTMAT\0" little-endian
constexpr std::uint64_t kVersion = 1;

std::string temp_path_for(const std::string& path) {
  return path + ".tmp" + std::to_string(::getpid());
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_file: cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return data;
}

void atomic_write(const std::string& path, const std::string& data) {
  const std::string tmp = temp_path_for(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw std::runtime_error("atomic_write: write failed for " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("atomic_write: rename to " + path + " failed");
  }
}

std::string to_csv(const Csv& table) {
  std::string out;
  for (const auto& c : table.comments) out += "# " + c + "\n";
  auto append_row = [&out](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  };
  append_row(table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::invalid_argument("to_csv: row width does not match header");
    append_row(row);
  }
  return out;
}

Csv parse_csv(const std::string& text) {
  Csv table;
  bool have_header = false;
  for (const auto& raw : split(text, '\n')) {
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      size_t start = 1;
      if (start < line.size() && line[start] == ' ') ++start;
      table.comments.push_back(line.substr(start));
      continue;
    }
    auto fields = split(line, ',');
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
    } else {
      if (fields.size() != table.header.size())
        throw std::runtime_error("parse_csv: row width does not match header");
      table.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw std::runtime_error("parse_csv: missing header row");
  return table;
}

void write_csv(const std::string& path, const Csv& table) {
  atomic_write(path, to_csv(table));
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& m,
                  const MatrixMeta& meta) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("write_matrix: matrix must be square");
  const std::uint64_t dims = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t header[8] = {kMagic,        kVersion,     dims,
                                   meta.family_tag, meta.n_max, meta.n_spins,
                                   meta.n_modes,  0};
  std::string data(sizeof header, '\0');
  std::memcpy(data.data(), header, sizeof header);
  const size_t payload = dims * dims * sizeof(double);
  data.resize(sizeof header + payload);
  // Eigen stores column-major; emit row-major as documented.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  std::memcpy(data.data() + sizeof header, rm.data(), payload);
  atomic_write(path, data);
}

Eigen::MatrixXd read_matrix(const std::string& path, MatrixMeta* meta) {
  const std::string data = read_file(path);
  std::uint64_t header[8];
  if (data.size() < sizeof header)
    throw std::runtime_error("read_matrix: file too short for header");
  std::memcpy(header, data.data(), sizeof header);
  if (header[0] != kMagic) throw std::runtime_error("read_matrix: bad magic");
  if (header[1] != kVersion)
    throw std::runtime_error("read_matrix: unsupported version");
  const std::uint64_t dims = header[2];
  const size_t payload = dims * dims * sizeof(double);
  if (data.size() != sizeof header + payload)
    throw std::runtime_error("read_matrix: payload size mismatch");
  if (meta) {
    meta->family_tag = header[3];
    meta->n_max = header[4];
    meta->n_spins = header[5];
    meta->n_modes = header[6];
  }
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(
      static_cast<Eigen::Index>(dims), static_cast<Eigen::Index>(dims));
  std::memcpy(rm.data(), data.data() + sizeof header, payload);
  return rm;
}

}  // namespace srpt::io
