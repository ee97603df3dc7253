#include "sfv/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>

#include "sfv/errors.hpp"

namespace sfv {

namespace {

constexpr char kMagic[8] = {'S', 'F', 'V', 'M', '0', '0', '0', '1'};

void put_u64(std::FILE* f, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  if (std::fwrite(b, 1, 8, f) != 8) throw IoError("write failed");
}

std::uint64_t get_u64(std::FILE* f) {
  unsigned char b[8];
  if (std::fread(b, 1, 8, f) != 8) throw IoError("truncated matrix file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_doubles(std::FILE* f, const double* data, size_t count) {
  if constexpr (std::endian::native == std::endian::little) {
    if (std::fwrite(data, sizeof(double), count, f) != count) throw IoError("write failed");
  } else {
    for (size_t i = 0; i < count; ++i) put_u64(f, std::bit_cast<std::uint64_t>(data[i]));
  }
}

void get_doubles(std::FILE* f, double* data, size_t count) {
  if constexpr (std::endian::native == std::endian::little) {
    if (std::fread(data, sizeof(double), count, f) != count)
      throw IoError("truncated matrix file");
  } else {
    for (size_t i = 0; i < count; ++i) data[i] = std::bit_cast<double>(get_u64(f));
  }
}

struct FileCloser {
  std::FILE* f;
  ~FileCloser() {
    if (f != nullptr) std::fclose(f);
  }
};

}  // namespace

void write_matrix(const std::string& path, const Eigen::MatrixXd& M) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw IoError("cannot open '" + path + "' for writing");
  FileCloser guard{f};
  if (std::fwrite(kMagic, 1, 8, f) != 8) throw IoError("write failed");
  put_u64(f, static_cast<std::uint64_t>(M.rows()));
  put_u64(f, static_cast<std::uint64_t>(M.cols()));
  put_doubles(f, M.data(), static_cast<size_t>(M.size()));
  if (std::fflush(f) != 0) throw IoError("write failed");
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (f == nullptr) throw IoError("cannot open '" + path + "' for reading");
  FileCloser guard{f};
  char magic[8];
  if (std::fread(magic, 1, 8, f) != 8 || std::memcmp(magic, kMagic, 8) != 0)
    throw IoError("'" + path + "' is not a matrix file (bad magic)");
  const std::uint64_t rows = get_u64(f);
  const std::uint64_t cols = get_u64(f);
  if (rows > (1u << 30) || cols > (1u << 30)) throw IoError("matrix dimensions implausibly large");
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  get_doubles(f, M.data(), static_cast<size_t>(M.size()));
  return M;
}

MatrixStreamWriter::MatrixStreamWriter(const std::string& path, Eigen::Index rows)
    : path_(path), rows_(rows) {
  file_ = std::fopen(path.c_str(), "wb");
  if (file_ == nullptr) throw IoError("cannot open '" + path + "' for writing");
  if (std::fwrite(kMagic, 1, 8, file_) != 8) throw IoError("write failed");
  put_u64(file_, static_cast<std::uint64_t>(rows_));
  put_u64(file_, 0);  // patched by close()
}

MatrixStreamWriter::~MatrixStreamWriter() {
  try {
    close();
  } catch (...) {
    // destructor must not throw; close() explicitly to observe failures
  }
}

void MatrixStreamWriter::append_column(const double* data) {
  if (file_ == nullptr) throw IoError("writer already closed");
  put_doubles(file_, data, static_cast<size_t>(rows_));
  ++cols_;
}

void MatrixStreamWriter::close() {
  if (file_ == nullptr) return;
  std::FILE* f = file_;
  file_ = nullptr;
  FileCloser guard{f};
  if (std::fseek(f, 16, SEEK_SET) != 0) throw IoError("seek failed on '" + path_ + "'");
  put_u64(f, static_cast<std::uint64_t>(cols_));
  if (std::fflush(f) != 0) throw IoError("write failed");
}

void write_csv(const std::string& path, const std::vector<std::string>& names,
               const std::vector<Eigen::VectorXd>& columns) {
  if (names.size() != columns.size()) throw IoError("csv: name/column count mismatch");
  if (columns.empty()) throw IoError("csv: no columns");
  const Eigen::Index nrows = columns[0].size();
  for (const auto& c : columns)
    if (c.size() != nrows) throw IoError("csv: ragged columns");
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw IoError("cannot open '" + path + "' for writing");
  FileCloser guard{f};
  for (size_t c = 0; c < names.size(); ++c)
    if (std::fprintf(f, "%s%s", c ? "," : "", names[c].c_str()) < 0) throw IoError("write failed");
  if (std::fputc('\n', f) == EOF) throw IoError("write failed");
  for (Eigen::Index r = 0; r < nrows; ++r) {
    for (size_t c = 0; c < columns.size(); ++c)
      if (std::fprintf(f, "%s%.17g", c ? "," : "", columns[c][r]) < 0)
        throw IoError("write failed");
    if (std::fputc('\n', f) == EOF) throw IoError("write failed");
  }
  if (std::fflush(f) != 0) throw IoError("write failed");
}

}  // namespace sfv
