#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace repeval {

// Row-major so a row (one sample) is contiguous and file IO is a straight copy.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using IMatrix =
    Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class Metric { Euclidean, Cosine };

enum class ErrorCode {
  ZeroNormRow,
  KTooLarge,
  TooFewPoints,
  DegenerateRatios,
  ZeroDistance,
  NumericOverflow,
  KOutOfRange,
  LabelLengthMismatch,
  EmptyAfterChunking,
  RankDeficient,
  ZeroVariance,
  LengthMismatch,
  AllTied,
  ShapeMismatch,
  NonFiniteLogDet,
  DimMismatch,
  BadMagic,
  TruncatedFile,
  NonFiniteValue,
  RaggedCsv,
  NameMismatch,
  InvalidArgument,
  FileError,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// N x m embedding container. Rows are samples; row index is the sample
// identity everywhere downstream.
struct EmbeddingSet {
  Matrix data;

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index cols() const { return data.cols(); }

  // Throws NonFiniteValue / InvalidArgument on malformed content.
  void validate() const;
};

// Exact nearest neighbors: indices[i][j] is the j-th nearest neighbor of
// point i (self excluded), distances sorted ascending, equidistant
// candidates ranked by lower row index.
struct NeighborTable {
  IMatrix indices;
  Matrix distances;

  Eigen::Index rows() const { return indices.rows(); }
  Eigen::Index k() const { return indices.cols(); }
};

}  // namespace repeval
