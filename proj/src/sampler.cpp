#include "copulaband/sampler.hpp"

#include <string>
#include <vector>

#include "copulaband/error.hpp"

namespace copulaband {
namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index + 1));
}

SeededStream SeededStream::split(std::uint64_t index) const { return SeededStream(derive_seed(seed_, index)); }

PseudoSample sample_copula(const CopulaModel& model, std::size_t n, SeededStream& stream) {
  require(n >= 1, "sample size must be at least 1");
  std::vector<double> us(n);
  std::vector<double> vs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = stream.uniform();
    const double w = stream.uniform();
    us[i] = u;
    try {
      vs[i] = inverse_conditional(model, w, u);
    } catch (const Error& e) {
      fail(ErrorCategory::numeric, "sampling " + model.label() + " failed at index " + std::to_string(i) + ": " +
                                       e.what());
    }
  }
  return PseudoSample(std::move(us), std::move(vs), Transform::identity);
}

}  // namespace copulaband
