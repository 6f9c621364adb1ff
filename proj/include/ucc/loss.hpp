#pragma once

// Uniform per-module loss, the loss-insensitive fidelity and a Monte Carlo
// harness over Haar-random unitaries.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ucc/decompose.hpp"
#include "ucc/metrics.hpp"

namespace ucc {

struct LossModel {
  double eta = 1.0;  // intensity transmissivity per module
  bool lossless_identities = true;
  std::set<BlockKind> apply_to = {BlockKind::universal, BlockKind::residual,
                                  BlockKind::cosine_sine};

  void check() const {
    if (!(eta > 0.0 && eta <= 1.0)) {
      throw std::invalid_argument("eta must lie in (0, 1], got " +
                                  std::to_string(eta));
    }
  }

  bool lossy(BlockKind k) const {
    if (k == BlockKind::identity) return !lossless_identities;
    return apply_to.count(k) != 0;
  }
};

/// Product of the blocks with each lossy block scaled by sqrt(eta) on its
/// window.
inline Matrix apply_loss(const Circuit& c, const LossModel& loss) {
  loss.check();
  validate(c, kReconstructionTol);
  const double a = std::sqrt(loss.eta);
  Matrix u = Matrix::Identity(c.n, c.n);
  for (const CircuitBlock& b : c.blocks) {
    apply_block(u, b, loss.lossy(b.kind) ? a : 1.0);
  }
  return u;
}

inline Matrix apply_loss(const LayerSchedule& s, const LossModel& loss) {
  return apply_loss(flatten(s), loss);
}

/// |tr(U^dagger V)|^2 / (N tr(V^dagger V)); unchanged by V -> cV.
inline double fidelity(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols()) {
    throw DimensionError("fidelity needs two square matrices of equal size");
  }
  const double norm = v.squaredNorm();
  if (norm < 1e-300) throw ZeroMatrixError("fidelity of a zero matrix");
  const cplx overlap = (u.adjoint() * v).trace();
  return std::norm(overlap) / (static_cast<double>(u.rows()) * norm);
}

inline double fidelity(const UnitaryMatrix& u, const Matrix& v) {
  return fidelity(u.matrix(), v);
}

struct FidelityStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (0 for one trial)
  int samples = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int m = 0;
  ArchTag arch = ArchTag::clements;
  double eta = 1.0;
  std::vector<double> values;  // per trial, in trial order
};

/// Worker count: UCC_THREADS if set and positive, else the hardware count.
inline int worker_count(int jobs) {
  int w = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("UCC_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) w = cap;
  }
  return std::max(1, std::min(w, jobs));
}

/// Loss-degraded fidelity of one decomposition. Padding identities only
/// exist in a layer schedule, so they are modelled through one when lossy.
inline double lossy_fidelity(const UnitaryMatrix& u, const Architecture& arch,
                             const LossModel& loss) {
  const Circuit c = decompose(u, arch).circuit;
  if (!loss.lossless_identities && !is_two_mode(arch.tag)) {
    return fidelity(u, apply_loss(schedule_layers(c), loss));
  }
  return fidelity(u, apply_loss(c, loss));
}

/// Trial i uses haar_random(n, derive_seed(seed, i)). Trials may run in
/// parallel; the reduction runs in trial order, so results do not depend on
/// the thread count.
inline FidelityStats monte_carlo_fidelity(int n, int m, ArchTag tag,
                                          const LossModel& loss, int trials,
                                          std::uint64_t seed) {
  if (trials < 1) throw DimensionError("trials must be >= 1");
  loss.check();
  const Architecture arch(tag, m);
  check_dimensions(arch, n);

  std::vector<double> f(static_cast<std::size_t>(trials), 0.0);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (int i = next++; i < trials && !failed; i = next++) {
      try {
        const UnitaryMatrix u =
            haar_random(n, derive_seed(seed, static_cast<std::uint64_t>(i)));
        f[static_cast<std::size_t>(i)] = lossy_fidelity(u, arch, loss);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const int workers = worker_count(trials);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  FidelityStats s;
  s.samples = trials;
  s.seed = seed;
  s.n = n;
  s.m = arch.module_size;
  s.arch = tag;
  s.eta = loss.eta;
  double sum = 0.0;
  for (double x : f) sum += x;
  s.mean = sum / trials;
  if (trials > 1) {
    double ss = 0.0;
    for (double x : f) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / (trials - 1));
  }
  s.values = std::move(f);
  return s;
}

}  // namespace ucc
