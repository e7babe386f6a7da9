#include "repeval/types.hpp"

#include <cmath>

namespace repeval {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ZeroNormRow: return "ZeroNormRow";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateRatios: return "DegenerateRatios";
    case ErrorCode::ZeroDistance: return "ZeroDistance";
    case ErrorCode::NumericOverflow: return "NumericOverflow";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::LabelLengthMismatch: return "LabelLengthMismatch";
    case ErrorCode::EmptyAfterChunking: return "EmptyAfterChunking";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::AllTied: return "AllTied";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFiniteLogDet: return "NonFiniteLogDet";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::RaggedCsv: return "RaggedCsv";
    case ErrorCode::NameMismatch: return "NameMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::FileError: return "FileError";
  }
  return "Unknown";
}

void EmbeddingSet::validate() const {
  if (data.rows() < 1 || data.cols() < 1)
    throw Error(ErrorCode::InvalidArgument, "embedding set is empty");
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    for (Eigen::Index j = 0; j < data.cols(); ++j)
      if (!std::isfinite(data(i, j)))
        throw Error(ErrorCode::NonFiniteValue,
                    "non-finite value at row " + std::to_string(i) + ", column " +
                        std::to_string(j));
}

}  // namespace repeval
