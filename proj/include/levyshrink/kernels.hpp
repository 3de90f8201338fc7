#pragma once

// Block-parallel Monte-Carlo kernels.  Work is cut into fixed blocks of
// kBlock draws; block b draws from Rng::stream(seed, b), and reductions add
// per-block partials in block order.  Serial and parallel execution therefore
// give bit-identical results, which is what the tests compare.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <vector>

#include "levyshrink/levy_core.hpp"
#include "levyshrink/meixner.hpp"

namespace levyshrink::kernels {

enum class Exec { serial, parallel };

inline constexpr std::size_t kBlock = 4096;

std::vector<double> subordinator_increments(const SubordinatorSpec& spec, std::size_t p,
                                            std::uint64_t seed, Exec exec = Exec::parallel);

std::vector<double> two_groups_increments(double theta, double delta, double eta, std::size_t p,
                                          std::uint64_t seed, Exec exec = Exec::parallel);

std::vector<double> gaussian_noise(std::size_t n, std::uint64_t seed, Exec exec = Exec::parallel);

/// `piece` is the per-increment law; `exact` selects the logit-beta sampler.
std::vector<double> meixner_increments(const MeixnerZParams& piece, std::size_t p,
                                       std::uint64_t seed, std::size_t terms, bool exact,
                                       Exec exec = Exec::parallel);

/// Sums of p increments, repeated n times: draws of T(s) built from p pieces.
std::vector<double> subordinator_sums(const SubordinatorSpec& spec, std::size_t p, std::size_t n,
                                      std::uint64_t seed, Exec exec = Exec::parallel);
std::vector<double> meixner_sums(const MeixnerZParams& whole, std::size_t p, std::size_t n,
                                 std::size_t terms, std::uint64_t seed, Exec exec = Exec::parallel);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo estimate of E exp(-t T(s)) from n direct draws of T(s).
McEstimate laplace_transform_mc(const SubordinatorSpec& spec, double t, std::size_t n,
                                std::uint64_t seed, Exec exec = Exec::parallel);

/// Fraction of two-groups slots with |beta_j| > eps over n slots.
double exceedance_fraction(double theta, double delta, double eta, double eps, std::size_t n,
                           std::uint64_t seed, Exec exec = Exec::parallel);

/// First exception raised inside a parallel loop, rethrown once the team has joined.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
#pragma omp critical(levyshrink_exception_slot)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

/// out[i] = f(i) for i < n; iterations run on the OpenMP team with dynamic scheduling.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f, Exec exec = Exec::parallel) {
  std::vector<T> out(n);
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  const long long count = static_cast<long long>(n);
  ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    slot.run([&] { out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i)); });
  }
  slot.rethrow();
  return out;
}

}  // namespace levyshrink::kernels
