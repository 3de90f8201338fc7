#include "levyshrink/kernels.hpp"

#include <cmath>

#include "levyshrink/rng.hpp"

namespace levyshrink::kernels {

namespace {

std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

// Fill out[i] for i < n; `draw(rng)` produces one value.
template <class Draw>
void fill_blocks(std::vector<double>& out, std::uint64_t seed, Exec exec, Draw draw) {
  const std::size_t n = out.size();
  const long long blocks = static_cast<long long>(block_count(n));
  auto run = [&](long long b) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(b));
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    for (std::size_t i = lo; i < hi; ++i) out[i] = draw(rng);
  };
  if (exec == Exec::serial) {
    for (long long b = 0; b < blocks; ++b) run(b);
    return;
  }
  ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < blocks; ++b) slot.run([&] { run(b); });
  slot.rethrow();
}

// Blocked sum of f(rng) over n draws; partials combined in block order.
template <class Term>
std::vector<double> block_partials(std::size_t n, std::uint64_t seed, Exec exec, Term term) {
  const long long blocks = static_cast<long long>(block_count(n));
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
  auto run = [&](long long b) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(b));
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(rng);
    partial[static_cast<std::size_t>(b)] = s;
  };
  if (exec == Exec::serial) {
    for (long long b = 0; b < blocks; ++b) run(b);
  } else {
    ExceptionSlot slot;
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < blocks; ++b) slot.run([&] { run(b); });
    slot.rethrow();
  }
  return partial;
}

double ordered_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

std::vector<double> subordinator_increments(const SubordinatorSpec& spec, std::size_t p,
                                            std::uint64_t seed, Exec exec) {
  std::vector<double> out(p);
  const double dt = spec.time() / static_cast<double>(p);
  fill_blocks(out, seed, exec, [&](Rng& rng) { return draw_increment(spec, dt, rng); });
  return out;
}

std::vector<double> two_groups_increments(double theta, double delta, double eta, std::size_t p,
                                          std::uint64_t seed, Exec exec) {
  std::vector<double> out(p);
  const double rate = theta * delta;
  fill_blocks(out, seed, exec, [&](Rng& rng) {
    const std::int64_t jumps = rng.poisson(rate);
    if (jumps == 0 || eta == 0.0) return 0.0;
    return eta * std::sqrt(static_cast<double>(jumps)) * rng.normal();
  });
  return out;
}

std::vector<double> gaussian_noise(std::size_t n, std::uint64_t seed, Exec exec) {
  std::vector<double> out(n);
  fill_blocks(out, seed, exec, [](Rng& rng) { return rng.normal(); });
  return out;
}

std::vector<double> meixner_increments(const MeixnerZParams& piece, std::size_t p,
                                       std::uint64_t seed, std::size_t terms, bool exact,
                                       Exec exec) {
  std::vector<double> out(p);
  if (exact) {
    fill_blocks(out, seed, exec, [&](Rng& rng) { return draw_z_exact(piece, rng); });
  } else {
    fill_blocks(out, seed, exec, [&](Rng& rng) { return draw_gz_series(piece, terms, rng); });
  }
  return out;
}

std::vector<double> subordinator_sums(const SubordinatorSpec& spec, std::size_t p, std::size_t n,
                                      std::uint64_t seed, Exec exec) {
  std::vector<double> out(n);
  const double dt = spec.time() / static_cast<double>(p);
  fill_blocks(out, seed, exec, [&](Rng& rng) {
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j) s += draw_increment(spec, dt, rng);
    return s;
  });
  return out;
}

std::vector<double> meixner_sums(const MeixnerZParams& whole, std::size_t p, std::size_t n,
                                 std::size_t terms, std::uint64_t seed, Exec exec) {
  std::vector<double> out(n);
  const MeixnerZParams piece = whole.piece(p);
  const bool exact = p == 1 && std::abs(whole.delta - 0.5) < 1e-15;
  fill_blocks(out, seed, exec, [&](Rng& rng) {
    if (exact) return draw_z_exact(piece, rng);
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j) s += draw_gz_series(piece, terms, rng);
    return s;
  });
  return out;
}

McEstimate laplace_transform_mc(const SubordinatorSpec& spec, double t, std::size_t n,
                                std::uint64_t seed, Exec exec) {
  const double s = spec.time();
  // Two passes over the same streams: first moment, then second.
  const auto first = block_partials(n, seed, exec, [&](Rng& rng) {
    return std::exp(-t * draw_increment(spec, s, rng));
  });
  const auto second = block_partials(n, seed, exec, [&](Rng& rng) {
    const double v = std::exp(-t * draw_increment(spec, s, rng));
    return v * v;
  });
  const double nn = static_cast<double>(n);
  McEstimate est;
  est.mean = ordered_sum(first) / nn;
  const double var = std::max(0.0, ordered_sum(second) / nn - est.mean * est.mean);
  est.std_error = std::sqrt(var / nn);
  return est;
}

double exceedance_fraction(double theta, double delta, double eta, double eps, std::size_t n,
                           std::uint64_t seed, Exec exec) {
  const double rate = theta * delta;
  const auto hits = block_partials(n, seed, exec, [&](Rng& rng) {
    const std::int64_t jumps = rng.poisson(rate);
    if (jumps == 0) return 0.0;
    const double beta = eta * std::sqrt(static_cast<double>(jumps)) * rng.normal();
    return std::abs(beta) > eps ? 1.0 : 0.0;
  });
  return ordered_sum(hits) / static_cast<double>(n);
}

}  // namespace levyshrink::kernels
