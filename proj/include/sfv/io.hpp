#ifndef SFV_IO_HPP_
#define SFV_IO_HPP_

#include <Eigen/Dense>
#include <cstdio>
#include <string>
#include <vector>

namespace sfv {

// Binary matrix format: magic "SFVM0001" (8 bytes), then rows and cols as
// unsigned 64-bit little-endian integers, then the payload column-major as
// 64-bit little-endian IEEE doubles. Round trips are bit-exact, NaN included.
void write_matrix(const std::string& path, const Eigen::MatrixXd& M);
Eigen::MatrixXd read_matrix(const std::string& path);

// Column-at-a-time writer in the same format, for matrices too large to hold
// while producing them; the column count is patched into the header on close.
class MatrixStreamWriter {
 public:
  MatrixStreamWriter(const std::string& path, Eigen::Index rows);
  ~MatrixStreamWriter();
  MatrixStreamWriter(const MatrixStreamWriter&) = delete;
  MatrixStreamWriter& operator=(const MatrixStreamWriter&) = delete;

  void append_column(const double* data);
  void close();  // flush + patch header; implied by destruction

 private:
  std::string path_;
  std::FILE* file_ = nullptr;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
};

// CSV with '.' decimals, ',' separators, 17 significant digits, final newline.
void write_csv(const std::string& path, const std::vector<std::string>& names,
               const std::vector<Eigen::VectorXd>& columns);

}  // namespace sfv

#endif  // SFV_IO_HPP_
