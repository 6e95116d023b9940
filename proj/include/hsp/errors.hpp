/*
 * Error taxonomy.  All library errors derive from HspError so callers can
 * catch broadly; the subclasses map onto the CLI exit codes (see
 * tools/hspsim.cpp): config/construction errors -> 1, law or evaluator
 * discrepancies -> 2, semiring capability errors -> 3, promise violations
 * -> 4.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace hsp {

class HspError : public std::runtime_error {
 public:
  explicit HspError(const std::string& message) : std::runtime_error(message) {}
};

// Tensor boundaries do not line up (composition/shape problems).
class ShapeError : public HspError {
 public:
  using HspError::HspError;
};

// Malformed input data: bad Cayley table, bad config, bad generator list, ...
class ConstructionError : public HspError {
 public:
  using HspError::HspError;
};

// A requested object exceeds the documented desk-scale caps.
class SizeLimitError : public HspError {
 public:
  using HspError::HspError;
};

// The current semiring cannot represent or support the requested value
// (e.g. a genuinely complex character over the real scalars).
class SemiringError : public HspError {
 public:
  using HspError::HspError;
};

// The hiding function is not constant-on-cosets / distinct-across-cosets,
// or sampled data contradicts the structure it is promised to have.
class PromiseError : public HspError {
 public:
  using HspError::HspError;
};

}  // namespace hsp
