#pragma once

// The seven decompositions. Two-mode meshes (Reck, Clements, de Guise) null
// one entry per factor; the modular architectures null whole groups of
// entries per block through the engine in nulling.hpp, and the CSD-based
// ones split 2M-mode blocks with the cosine-sine decomposition.

#include <tuple>
#include <utility>
#include <vector>

#include "ucc/circuit.hpp"
#include "ucc/nulling.hpp"

namespace ucc {

struct DecompositionResult {
  Circuit circuit;
  double residual_error = 0.0;
  std::vector<LoggedFactor> factor_log;
};

/// Moves a diagonal phase pair through an inverted factor:
/// T^{-1}(theta, phi) D(alpha, beta) = D(alpha', beta') T(theta, phi').
inline std::tuple<double, double, double, double> migrate_phase(double theta,
                                                                double phi,
                                                                double alpha,
                                                                double beta) {
  return {theta, wrap_angle(alpha - beta + kPi), wrap_angle(beta - phi + kPi),
          wrap_angle(beta)};
}

namespace detail {

inline CircuitBlock two_mode_block(int m, const Matrix2& core) {
  return CircuitBlock::universal(m, Matrix(core));
}

inline DecompositionResult finish(const UnitaryMatrix& u, Circuit c,
                                  std::vector<LoggedFactor> log) {
  DecompositionResult r;
  r.residual_error = max_abs_diff(reconstruct(c), u.matrix());
  r.circuit = std::move(c);
  r.factor_log = std::move(log);
  return r;
}

inline std::vector<double> diagonal_phases(const Matrix& d) {
  std::vector<double> p(static_cast<std::size_t>(d.rows()));
  for (Eigen::Index j = 0; j < d.rows(); ++j) {
    p[static_cast<std::size_t>(j)] = wrap_angle(std::arg(d(j, j)));
  }
  return p;
}

inline bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace detail

/// Nulls the lower-left triangle row by row from the bottom, always from the
/// right: U = D R_p ... R_1.
inline DecompositionResult decompose_reck(const UnitaryMatrix& u) {
  const Architecture arch(ArchTag::reck);
  check_dimensions(arch, u.n());
  const int n = u.n();
  Matrix w = u.matrix();
  Circuit c{n, arch, {}};
  std::vector<LoggedFactor> log;
  int step = 0;
  for (int row = n - 1; row >= 1; --row) {
    for (int col = 0; col < row; ++col) {
      const GivensFactor f =
          solve_null_right(w, row, col, col + 1, NullTarget::first);
      apply_factor(w, f);
      w(row, col) = 0.0;
      log.push_back({f, ++step});
      c.blocks.push_back(detail::two_mode_block(col, givens_core(inverse(f))));
    }
  }
  c.blocks.push_back(CircuitBlock::phase(0, detail::diagonal_phases(w)));
  return detail::finish(u, std::move(c), std::move(log));
}

/// Alternates right and left nulling along anti-diagonals, then moves the
/// diagonal phases through the left factors so they act last.
inline DecompositionResult decompose_clements(const UnitaryMatrix& u) {
  const Architecture arch(ArchTag::clements);
  check_dimensions(arch, u.n());
  const int n = u.n();
  Matrix w = u.matrix();
  std::vector<LoggedFactor> log;
  std::vector<GivensFactor> rights;
  std::vector<GivensFactor> lefts;
  int step = 0;
  for (int i = 0; i <= n - 2; ++i) {
    if (i % 2 == 0) {
      for (int j = 0; j <= i; ++j) {
        const int col = i - j;
        const GivensFactor f =
            solve_null_right(w, n - 1 - j, col, col + 1, NullTarget::first);
        apply_factor(w, f);
        w(n - 1 - j, col) = 0.0;
        rights.push_back(f);
        log.push_back({f, ++step});
      }
    } else {
      for (int j = 1; j <= i + 1; ++j) {
        const int row = n + j - i - 2;
        const GivensFactor f =
            solve_null_left(w, j - 1, row - 1, row, NullTarget::second);
        apply_factor(w, f);
        w(row, j - 1) = 0.0;
        lefts.push_back(f);
        log.push_back({f, ++step});
      }
    }
  }

  Circuit c{n, arch, {}};
  for (const GivensFactor& f : rights) {
    c.blocks.push_back(detail::two_mode_block(f.m, givens_core(inverse(f))));
  }
  // U = L_1^{-1} ... L_k^{-1} D (rights); walk D leftwards starting at L_k.
  std::vector<double> d = detail::diagonal_phases(w);
  for (auto it = lefts.rbegin(); it != lefts.rend(); ++it) {
    auto& a = d[static_cast<std::size_t>(it->m)];
    auto& b = d[static_cast<std::size_t>(it->n)];
    const auto [theta, phi, a2, b2] = migrate_phase(it->theta, it->phi, a, b);
    a = a2;
    b = b2;
    c.blocks.push_back(
        detail::two_mode_block(it->m, givens_core(theta, phi, false)));
  }
  c.blocks.push_back(CircuitBlock::phase(0, std::move(d)));
  return detail::finish(u, std::move(c), std::move(log));
}

/// Peels one mode per round by nulling its column from the bottom with left
/// factors; the phase left on the diagonal is folded into the first block of
/// the round. The last two modes end in a single two-mode block.
inline DecompositionResult decompose_deguise(const UnitaryMatrix& u) {
  const Architecture arch(ArchTag::deguise);
  check_dimensions(arch, u.n());
  const int n = u.n();
  Matrix w = u.matrix();
  std::vector<LoggedFactor> log;
  std::vector<std::vector<CircuitBlock>> rounds;
  int step = 0;
  for (int s = 0; s + 2 < n; ++s) {
    std::vector<GivensFactor> fs;
    for (int j = n - 1; j > s; --j) {
      const GivensFactor f = solve_null_left(w, s, j - 1, j, NullTarget::second);
      apply_factor(w, f);
      w(j, s) = 0.0;
      fs.push_back(f);
      log.push_back({f, ++step});
    }
    // (T_{s,s+1} ... T_{n-2,n-1}) U = e^{ia} (+) U'; undo in reverse.
    std::vector<CircuitBlock> round;
    for (auto it = fs.rbegin(); it != fs.rend(); ++it) {
      Matrix core(givens_core(inverse(*it)));
      if (it->m == s) core.col(0) *= w(s, s) / std::abs(w(s, s));
      round.push_back(detail::two_mode_block(it->m, core));
    }
    rounds.push_back(std::move(round));
    w.row(s).setZero();
    w.col(s).setZero();
    w(s, s) = 1.0;
  }
  Circuit c{n, arch, {}};
  c.blocks.push_back(
      CircuitBlock::universal(n - 2, w.bottomRightCorner(2, 2)));
  for (auto it = rounds.rbegin(); it != rounds.rend(); ++it) {
    for (auto& b : *it) c.blocks.push_back(std::move(b));
  }
  return detail::finish(u, std::move(c), std::move(log));
}

namespace detail {

// Elimination layout: N = k(M-1)+1. Square (a, b) holds the entries
// (a*m1 + i, b*m1 + 1 + j) for 0 <= i, j < m1; its part with j >= i goes to
// a universal block, the part with j < i (a < b) to a residual block.
struct ElimLayout {
  int n, m, m1, k;

  std::vector<Entry> universal_entries(int a, int b) const {
    std::vector<Entry> e;
    for (int i = 0; i < m1; ++i) {
      for (int j = i; j < m1; ++j) e.push_back({a * m1 + i, b * m1 + 1 + j});
    }
    return e;
  }
  std::vector<Entry> residual_entries(int a, int b) const {
    std::vector<Entry> e;
    for (int i = 0; i < m1; ++i) {
      for (int j = 0; j < i; ++j) e.push_back({a * m1 + i, b * m1 + 1 + j});
    }
    return e;
  }

  BlockPlan universal_right(int a, int b) const {
    return {Side::right, BlockKind::universal, b * m1, m, universal_entries(a, b)};
  }
  BlockPlan universal_left(int a, int b) const {
    return {Side::left, BlockKind::universal, a * m1, m, universal_entries(a, b)};
  }
  BlockPlan residual_right(int a, int b) const {
    return {Side::right, BlockKind::residual, (b - 1) * m1 + 1, 2 * m - 3,
            residual_entries(a, b)};
  }
  BlockPlan residual_left(int a, int b) const {
    return {Side::left, BlockKind::residual, a * m1 + 1, 2 * m - 3,
            residual_entries(a, b)};
  }
};

inline DecompositionResult run_plans(const UnitaryMatrix& u,
                                     const Architecture& arch,
                                     const std::vector<BlockPlan>& plans) {
  NullingResult nr = null_with_plans(u.matrix(), plans);
  std::vector<double> rest =
      absorb_phases(nr.blocks, nr.phase_pos, std::move(nr.phases));
  if (!all_zero(rest)) {
    nr.blocks.insert(nr.blocks.begin() + static_cast<std::ptrdiff_t>(nr.phase_pos),
                     CircuitBlock::phase(0, std::move(rest)));
  }
  Circuit c{u.n(), arch, std::move(nr.blocks)};
  return finish(u, std::move(c), nr.log);
}

}  // namespace detail

/// Rectangular elimination layout: rounds along block anti-diagonals,
/// alternating right and left nulling.
inline DecompositionResult decompose_elim_rect(const UnitaryMatrix& u, int m) {
  const Architecture arch(ArchTag::elim_rect, m);
  check_dimensions(arch, u.n());
  const detail::ElimLayout lay{u.n(), m, m - 1, elimination_k(u.n(), m)};
  const int k = lay.k;
  std::vector<detail::BlockPlan> plans;
  for (int rho = 0; rho < k; ++rho) {
    const int d = k - 1 - rho;
    if (rho % 2 == 0) {
      for (int a = 0; a + d <= k - 1; ++a) {
        plans.push_back(lay.universal_right(a, a + d));
        if (a + d + 1 <= k - 1) plans.push_back(lay.residual_right(a, a + d + 1));
      }
    } else {
      for (int b = k - 1; b >= d; --b) {
        plans.push_back(lay.universal_left(b - d, b));
        if (b - d - 1 >= 0) plans.push_back(lay.residual_left(b - d - 1, b));
      }
    }
  }
  return detail::run_plans(u, arch, plans);
}

/// Triangular elimination layout: everything nulled from the right, one block
/// row of squares at a time.
inline DecompositionResult decompose_elim_triangular(const UnitaryMatrix& u,
                                                     int m) {
  const Architecture arch(ArchTag::elim_triangular, m);
  check_dimensions(arch, u.n());
  const detail::ElimLayout lay{u.n(), m, m - 1, elimination_k(u.n(), m)};
  const int k = lay.k;
  std::vector<detail::BlockPlan> plans;
  for (int a = 0; a < k; ++a) {
    for (int b = k - 1; b >= a; --b) plans.push_back(lay.universal_right(a, b));
    for (int b = k - 1; b > a; --b) plans.push_back(lay.residual_right(a, b));
  }
  return detail::run_plans(u, arch, plans);
}

namespace detail {

/// Stage one of the rectangular CSD layout: 2M-mode blocks on windows
/// starting at multiples of M, in nulling order. Exposed for tests.
inline std::vector<BlockPlan> csd_rect_plans(int n, int m) {
  const int l = n / m;
  std::vector<BlockPlan> plans;
  for (int rho = 1; rho <= l - 1; ++rho) {
    const int band = l - rho;
    const int lo = (band - 1) * m + 1;
    const int hi = band == l - 1 ? n - 1 : band * m;
    std::vector<std::vector<Entry>> per_window(static_cast<std::size_t>(l - 1));
    for (int r = 0; r < n; ++r) {
      for (int c = r + lo; c <= std::min(r + hi, n - 1); ++c) {
        int t;
        if (rho % 2 == 1) {
          t = std::max(c / m - 1, l - 1 - rho);
        } else {
          t = std::min(r / m, rho - 1);
        }
        per_window[static_cast<std::size_t>(t)].push_back({r, c});
      }
    }
    if (rho % 2 == 1) {
      for (int t = l - 1 - rho; t <= l - 2; ++t) {
        auto& e = per_window[static_cast<std::size_t>(t)];
        if (!e.empty()) {
          plans.push_back({Side::right, BlockKind::universal, t * m, 2 * m, e});
        }
      }
    } else {
      for (int t = rho - 1; t >= 0; --t) {
        auto& e = per_window[static_cast<std::size_t>(t)];
        if (!e.empty()) {
          plans.push_back({Side::left, BlockKind::universal, t * m, 2 * m, e});
        }
      }
    }
  }
  return plans;
}

/// Appends a universal block, folding it into the previous block on the same
/// partition when nothing else touches that partition in between.
inline void push_merged(std::vector<CircuitBlock>& out, CircuitBlock b) {
  for (std::size_t i = out.size(); i-- > 0;) {
    CircuitBlock& prev = out[i];
    if (!prev.overlaps(b)) continue;
    if (prev.kind == BlockKind::universal && prev.start == b.start &&
        prev.size == b.size) {
      prev.matrix = b.matrix * prev.matrix;
      return;
    }
    break;
  }
  out.push_back(std::move(b));
}

inline void push_csd(std::vector<CircuitBlock>& out, int start, int m,
                     const CSDFactors& f) {
  push_merged(out, CircuitBlock::universal(start, f.right_top()));
  push_merged(out, CircuitBlock::universal(start + m, f.right_bottom()));
  out.push_back(CircuitBlock::cosine_sine(start, f.thetas));
  push_merged(out, CircuitBlock::universal(start, f.left_top()));
  push_merged(out, CircuitBlock::universal(start + m, f.left_bottom()));
}

/// Triangular CSD recursion on partitions s..l-1 of size m; `x` spans them.
inline void csd_triangular_blocks(const Matrix& x, int s, int m,
                                  std::vector<CircuitBlock>& out) {
  const int size = static_cast<int>(x.rows());
  const int base = s * m;
  if (size == m) {
    out.push_back(CircuitBlock::universal(base, x));
    return;
  }
  // Peel the leading partition repeatedly; right-hand remainders act on the
  // partitions below s and accumulate into y.
  std::vector<CSDFactors> steps;
  Matrix y = Matrix::Identity(size - m, size - m);
  Matrix cur = x;
  while (cur.rows() > m) {
    const int rest = static_cast<int>(cur.rows()) - m;
    CSDFactors f = cosine_sine_decompose(cur, m, rest);
    Matrix rp = Matrix::Identity(size - m, size - m);
    rp.bottomRightCorner(rest, rest) = f.right_bottom();
    y = rp * y;
    cur = f.left_bottom();
    steps.push_back(std::move(f));
  }
  csd_triangular_blocks(y, s + 1, m, out);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const CSDFactors& f = steps[i];
    const int at = base + static_cast<int>(i) * m;
    out.push_back(CircuitBlock::universal(at, f.right_top()));
    out.push_back(CircuitBlock::cosine_sine(at, f.thetas));
    out.push_back(CircuitBlock::universal(at, f.left_top()));
  }
  out.push_back(CircuitBlock::universal(base + size - m, cur));
}

}  // namespace detail

inline DecompositionResult decompose_csd_triangular(const UnitaryMatrix& u,
                                                    int m) {
  const Architecture arch(ArchTag::csd_triangular, m);
  check_dimensions(arch, u.n());
  Circuit c{u.n(), arch, {}};
  detail::csd_triangular_blocks(u.matrix(), 0, m, c.blocks);
  return detail::finish(u, std::move(c), {});
}

inline DecompositionResult decompose_csd_rect(const UnitaryMatrix& u, int m) {
  const Architecture arch(ArchTag::csd_rect, m);
  check_dimensions(arch, u.n());
  const int n = u.n();
  if (n == m) {
    Circuit c{n, arch, {CircuitBlock::universal(0, u.matrix())}};
    return detail::finish(u, std::move(c), {});
  }
  detail::NullingResult nr =
      detail::null_with_plans(u.matrix(), detail::csd_rect_plans(n, m));
  std::vector<double> rest =
      detail::absorb_phases(nr.blocks, nr.phase_pos, std::move(nr.phases));
  Circuit c{n, arch, {}};
  for (std::size_t i = 0; i < nr.blocks.size(); ++i) {
    if (i == nr.phase_pos && !detail::all_zero(rest)) {
      c.blocks.push_back(CircuitBlock::phase(0, rest));
    }
    const CircuitBlock& b = nr.blocks[i];
    detail::push_csd(c.blocks, b.start, m, cosine_sine_decompose(b.matrix, m, m));
  }
  return detail::finish(u, std::move(c), nr.log);
}

inline DecompositionResult decompose(const UnitaryMatrix& u,
                                     const Architecture& arch) {
  check_dimensions(arch, u.n());
  switch (arch.tag) {
    case ArchTag::reck: return decompose_reck(u);
    case ArchTag::clements: return decompose_clements(u);
    case ArchTag::deguise: return decompose_deguise(u);
    case ArchTag::csd_triangular:
      return decompose_csd_triangular(u, arch.module_size);
    case ArchTag::elim_triangular:
      return decompose_elim_triangular(u, arch.module_size);
    case ArchTag::csd_rect: return decompose_csd_rect(u, arch.module_size);
    case ArchTag::elim_rect: return decompose_elim_rect(u, arch.module_size);
  }
  throw UnsupportedArchitectureError("unknown architecture");
}

}  // namespace ucc
