#pragma once

// Block-wise nulling of upper-triangle entries. A block plan names the
// entries one module has to null, the side it multiplies from and the window
// it may mix. Partners are chosen so that every entry nulled earlier stays
// exactly zero.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "ucc/circuit.hpp"

namespace ucc {

struct LoggedFactor {
  GivensFactor factor;
  int step = 0;  // 1-based position in the nulling sequence

  bool operator==(const LoggedFactor&) const = default;
};

}  // namespace ucc

namespace ucc::detail {

struct Entry {
  int row;
  int col;
};

struct BlockPlan {
  Side side = Side::right;
  BlockKind kind = BlockKind::universal;
  int start = 0;
  int size = 0;
  std::vector<Entry> entries;
};

/// A block produced by nulling. `forward` is the matrix that appears in the
/// factorization U = (lefts) * D * (rights).
struct NulledBlock {
  BlockPlan plan;
  Matrix forward;
};

/// Right blocks null row by row (top-down, right-to-left within a row);
/// left blocks null column by column (right-to-left, top-down within a
/// column).
inline void order_entries(BlockPlan& plan) {
  auto& e = plan.entries;
  if (plan.side == Side::right) {
    std::sort(e.begin(), e.end(), [](Entry a, Entry b) {
      return a.row != b.row ? a.row < b.row : a.col > b.col;
    });
  } else {
    std::sort(e.begin(), e.end(), [](Entry a, Entry b) {
      return a.col != b.col ? a.col > b.col : a.row < b.row;
    });
  }
}

class NullingEngine {
 public:
  explicit NullingEngine(Matrix u)
      : work_(std::move(u)),
        n_(static_cast<int>(work_.rows())),
        nulled_(static_cast<std::size_t>(n_ * n_), 0) {}

  NulledBlock run(BlockPlan plan) {
    order_entries(plan);
    auto& e = plan.entries;
    Matrix acc = Matrix::Identity(plan.size, plan.size);
    for (const Entry& t : e) {
      if (plan.side == Side::right) {
        const int p = right_partner(plan, t);
        const GivensFactor f = solve_null_right(work_, t.row, p, t.col);
        apply_factor(work_, f);
        mix_cols(acc, p - plan.start, t.col - plan.start, givens_core(f));
        work_(t.row, t.col) = 0.0;
        log_.push_back({f, ++step_});
      } else {
        const int p = left_partner(plan, t);
        const GivensFactor f = solve_null_left(work_, t.col, t.row, p);
        apply_factor(work_, f);
        mix_rows(acc, t.row - plan.start, p - plan.start, givens_core(f));
        work_(t.row, t.col) = 0.0;
        log_.push_back({f, ++step_});
      }
      mark(t.row, t.col);
    }
    return {std::move(plan), acc.adjoint()};
  }

  const Matrix& work() const { return work_; }
  const std::vector<LoggedFactor>& log() const { return log_; }
  bool nulled(int r, int c) const { return nulled_[idx(r, c)] != 0; }

 private:
  std::size_t idx(int r, int c) const {
    return static_cast<std::size_t>(r * n_ + c);
  }
  void mark(int r, int c) { nulled_[idx(r, c)] = 1; }

  // Mixing columns (p, c) keeps row r' intact iff both entries are already
  // nulled or neither is.
  bool right_ok(Entry t, int p) const {
    if (nulled(t.row, p) || nulled(t.row, t.col)) return false;
    for (int r = 0; r < n_; ++r) {
      if (r != t.row && nulled(r, p) != nulled(r, t.col)) return false;
    }
    return true;
  }

  bool left_ok(Entry t, int p) const {
    if (nulled(p, t.col) || nulled(t.row, t.col)) return false;
    for (int c = 0; c < n_; ++c) {
      if (c != t.col && nulled(t.row, c) != nulled(p, c)) return false;
    }
    return true;
  }

  int right_partner(const BlockPlan& plan, Entry t) const {
    for (int p = t.col - 1; p >= plan.start; --p) {
      if (right_ok(t, p)) return p;
    }
    throw std::logic_error("no column partner for entry (" +
                           std::to_string(t.row + 1) + "," +
                           std::to_string(t.col + 1) + ") in window starting at " +
                           std::to_string(plan.start + 1));
  }

  int left_partner(const BlockPlan& plan, Entry t) const {
    for (int p = t.row + 1; p < plan.start + plan.size; ++p) {
      if (left_ok(t, p)) return p;
    }
    throw std::logic_error("no row partner for entry (" +
                           std::to_string(t.row + 1) + "," +
                           std::to_string(t.col + 1) + ") in window starting at " +
                           std::to_string(plan.start + 1));
  }

  Matrix work_;
  int n_;
  std::vector<char> nulled_;
  std::vector<LoggedFactor> log_;
  int step_ = 0;
};

/// Runs the plans in order and assembles the blocks in application order:
/// right blocks in nulling order, then the diagonal phases, then left blocks
/// in reverse nulling order. Returns the blocks and the index at which the
/// phases sit (phases act before blocks[phase_pos]).
struct NullingResult {
  std::vector<CircuitBlock> blocks;
  std::size_t phase_pos = 0;
  std::vector<double> phases;
  std::vector<LoggedFactor> log;
};

inline NullingResult null_with_plans(const Matrix& u,
                                     const std::vector<BlockPlan>& plans) {
  NullingEngine eng(u);
  std::vector<CircuitBlock> rights;
  std::vector<CircuitBlock> lefts;
  for (const BlockPlan& p : plans) {
    NulledBlock nb = eng.run(p);
    CircuitBlock b = CircuitBlock::universal(p.start, std::move(nb.forward));
    b.kind = p.kind;
    (p.side == Side::right ? rights : lefts).push_back(std::move(b));
  }
  NullingResult out;
  out.blocks = std::move(rights);
  out.phase_pos = out.blocks.size();
  for (auto it = lefts.rbegin(); it != lefts.rend(); ++it) {
    out.blocks.push_back(std::move(*it));
  }
  const Matrix& d = eng.work();
  out.phases.resize(static_cast<std::size_t>(d.rows()));
  for (Eigen::Index j = 0; j < d.rows(); ++j) {
    out.phases[static_cast<std::size_t>(j)] = wrap_angle(std::arg(d(j, j)));
  }
  out.log = eng.log();
  return out;
}

/// Moves each diagonal phase into a block adjacent to it on its mode: the
/// nearest block applied after the phases, else the nearest one applied
/// before, preferring universal blocks over residual ones. Phases with no
/// such neighbour are returned.
inline std::vector<double> absorb_phases(std::vector<CircuitBlock>& blocks,
                                         std::size_t phase_pos,
                                         std::vector<double> phases) {
  for (int j = 0; j < static_cast<int>(phases.size()); ++j) {
    const cplx ph = std::polar(1.0, phases[static_cast<std::size_t>(j)]);
    CircuitBlock* after = nullptr;
    CircuitBlock* before = nullptr;
    for (std::size_t i = phase_pos; i < blocks.size() && !after; ++i) {
      if (blocks[i].covers(j)) after = &blocks[i];
    }
    for (std::size_t i = phase_pos; i-- > 0 && !before;) {
      if (blocks[i].covers(j)) before = &blocks[i];
    }
    auto is = [](const CircuitBlock* b, BlockKind k) { return b && b->kind == k; };
    if (is(after, BlockKind::universal) ||
        (is(after, BlockKind::residual) && !is(before, BlockKind::universal))) {
      after->matrix.col(j - after->start) *= ph;
    } else if (is(before, BlockKind::universal) ||
               is(before, BlockKind::residual)) {
      before->matrix.row(j - before->start) *= ph;
    } else {
      continue;
    }
    phases[static_cast<std::size_t>(j)] = 0.0;
  }
  return phases;
}

}  // namespace ucc::detail
