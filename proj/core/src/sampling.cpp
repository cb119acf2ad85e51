#include "unispace/sampling.hpp"

#include <boost/random/sobol.hpp>

#include <stdexcept>

namespace unispace {

struct SobolSequence::Impl {
  explicit Impl(int d) : engine(static_cast<std::size_t>(d)) {}
  boost::random::sobol_engine<std::uint32_t, 32> engine;
};

SobolSequence::SobolSequence(int dim, std::uint64_t offset) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("Sobol dimension must be positive");
  impl_ = std::make_unique<Impl>(dim);
  if (offset) impl_->engine.seed(offset);
}

SobolSequence::~SobolSequence() = default;
SobolSequence::SobolSequence(SobolSequence&&) noexcept = default;
SobolSequence& SobolSequence::operator=(SobolSequence&&) noexcept = default;

std::vector<double> SobolSequence::next() {
  std::vector<double> p(dim_);
  constexpr double scale = 1.0 / 4294967296.0;
  for (int i = 0; i < dim_; ++i) p[i] = (static_cast<double>(impl_->engine()) + 0.5) * scale;
  return p;
}

std::vector<std::vector<double>> sobol_box(int dim, int count, double lo, double hi, std::uint64_t offset) {
  SobolSequence s(dim, offset);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    auto p = s.next();
    for (double& v : p) v = lo + (hi - lo) * v;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace unispace
