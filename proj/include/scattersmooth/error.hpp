#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scattersmooth {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration value.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Requested more neighbors than the dataset holds.
class InsufficientPoints : public Error {
 public:
  using Error::Error;
};

/// Neighborhood carries no usable information: zero radius or all-zero weights.
class DegenerateNeighborhood : public Error {
 public:
  using Error::Error;
};

/// Normal matrix is numerically singular. Carries the rank reached before the
/// elimination gave up, so callers can decide how far to degrade a fit.
class RankDeficient : public Error {
 public:
  RankDeficient(const std::string& what, std::size_t effective_rank)
      : Error(what), effective_rank_(effective_rank) {}

  std::size_t effective_rank() const noexcept { return effective_rank_; }

 private:
  std::size_t effective_rank_;
};

/// Failure while evaluating one query of a batch; remembers which one.
class QueryError : public Error {
 public:
  QueryError(std::size_t query_index, const std::string& what)
      : Error("query " + std::to_string(query_index) + ": " + what),
        query_index_(query_index) {}

  std::size_t query_index() const noexcept { return query_index_; }

 private:
  std::size_t query_index_;
};

/// File I/O failure; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace scattersmooth
