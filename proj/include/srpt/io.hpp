// io.hpp — CSV/file plumbing and the binary matrix dump format.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace srpt::io {

// 12 significant digits, shortest form ("%.12g").
std::string format_double(double v);

// Whole-file helpers. atomic_write stages to "<path>.tmp<pid>" and renames, so
// a partial file is never visible at the target path.
std::string read_file(const std::string& path);
void atomic_write(const std::string& path, const std::string& data);

// ---- CSV ----
// Comment lines ("# ...") carry run metadata, then one header row, then data.
// Fields never contain commas or quotes, so no quoting dialect is needed.
struct Csv {
  std::vector<std::string> comments;                // without the "# " prefix
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Csv& table);               // LF line endings
Csv parse_csv(const std::string& text);             // tolerates CRLF
void write_csv(const std::string& path, const Csv& table);  // atomic

// ---- binary matrix dump ----
// Layout: eight little-endian uint64 fields, then rows*cols IEEE-754 doubles
// row-major. Fields: magic "SRPTMAT\0", version (1), dims (= rows = cols),
// family tag (Family enum value, ~0 when not applicable), n_max of mode 0,
// n_spins, n_modes, reserved (0).
struct MatrixMeta {
  std::uint64_t family_tag = ~0ull;
  std::uint64_t n_max = 0;
  std::uint64_t n_spins = 0;
  std::uint64_t n_modes = 0;
};

void write_matrix(const std::string& path, const Eigen::MatrixXd& m,
                  const MatrixMeta& meta);
Eigen::MatrixXd read_matrix(const std::string& path, MatrixMeta* meta = nullptr);

}  // namespace srpt::io
