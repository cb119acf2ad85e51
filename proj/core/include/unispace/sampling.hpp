#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace unispace {

// Deterministic Sobol points in [0,1)^dim, starting `offset` points into the sequence.
class SobolSequence {
 public:
  SobolSequence(int dim, std::uint64_t offset = 0);
  ~SobolSequence();
  SobolSequence(SobolSequence&&) noexcept;
  SobolSequence& operator=(SobolSequence&&) noexcept;

  int dim() const { return dim_; }
  std::vector<double> next();

 private:
  struct Impl;
  int dim_;
  std::unique_ptr<Impl> impl_;
};

std::vector<std::vector<double>> sobol_box(int dim, int count, double lo, double hi, std::uint64_t offset = 0);

}  // namespace unispace
