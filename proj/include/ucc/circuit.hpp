#pragma once

// Circuit IR: typed blocks in application order, reconstruction and the
// structural checks shared by every consumer of a circuit.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ucc/linalg.hpp"

namespace ucc {

enum class ArchTag {
  reck,
  clements,
  deguise,
  csd_triangular,
  elim_triangular,
  csd_rect,
  elim_rect,
};

inline constexpr std::array<ArchTag, 7> kAllArchitectures = {
    ArchTag::reck,           ArchTag::clements,  ArchTag::deguise,
    ArchTag::csd_triangular, ArchTag::elim_triangular, ArchTag::csd_rect,
    ArchTag::elim_rect};

/// Name used in circuit JSON.
inline std::string_view tag_name(ArchTag t) {
  switch (t) {
    case ArchTag::reck: return "reck";
    case ArchTag::clements: return "clements";
    case ArchTag::deguise: return "deguise";
    case ArchTag::csd_triangular: return "csd_triangular";
    case ArchTag::elim_triangular: return "elim_triangular";
    case ArchTag::csd_rect: return "csd_rect";
    case ArchTag::elim_rect: return "elim_rect";
  }
  return "?";
}

/// Name used on the command line.
inline std::string_view cli_name(ArchTag t) {
  switch (t) {
    case ArchTag::reck: return "reck";
    case ArchTag::clements: return "clements";
    case ArchTag::deguise: return "deguise";
    case ArchTag::csd_triangular: return "csd-tri";
    case ArchTag::elim_triangular: return "elim-tri";
    case ArchTag::csd_rect: return "csd-rect";
    case ArchTag::elim_rect: return "elim-rect";
  }
  return "?";
}

/// Accepts both the JSON and the command-line spelling.
inline std::optional<ArchTag> parse_arch_tag(std::string_view s) {
  for (ArchTag t : kAllArchitectures) {
    if (s == tag_name(t) || s == cli_name(t)) return t;
  }
  return std::nullopt;
}

inline bool is_two_mode(ArchTag t) {
  return t == ArchTag::reck || t == ArchTag::clements || t == ArchTag::deguise;
}

inline bool is_elimination(ArchTag t) {
  return t == ArchTag::elim_rect || t == ArchTag::elim_triangular;
}

inline bool is_csd(ArchTag t) {
  return t == ArchTag::csd_rect || t == ArchTag::csd_triangular;
}

struct Architecture {
  ArchTag tag = ArchTag::clements;
  int module_size = 2;  // M; always 2 for the two-mode architectures

  Architecture() = default;
  Architecture(ArchTag t, int m = 2) : tag(t), module_size(is_two_mode(t) ? 2 : m) {}

  bool operator==(const Architecture&) const = default;
};

/// k for N = k(M-1)+1, l for N = lM.
inline int elimination_k(int n, int m) { return (n - 1) / (m - 1); }
inline int csd_l(int n, int m) { return n / m; }

/// Throws DimensionError naming the required congruence.
inline void check_dimensions(const Architecture& arch, int n) {
  const int m = arch.module_size;
  const std::string where = std::string(tag_name(arch.tag)) + " with N=" +
                            std::to_string(n) + ", M=" + std::to_string(m);
  if (n < 1) throw DimensionError(where + ": need N >= 1");
  if (is_two_mode(arch.tag)) {
    if (n < 2) throw DimensionError(where + ": need N >= 2");
    return;
  }
  if (is_elimination(arch.tag)) {
    if (m < 2) throw DimensionError(where + ": need M >= 2");
    if (n < m || (n - 1) % (m - 1) != 0) {
      throw DimensionError(where + ": need N = k(M-1)+1 for integer k >= 1");
    }
    return;
  }
  if (m < 1) throw DimensionError(where + ": need M >= 1");
  if (n < m || n % m != 0) {
    throw DimensionError(where + ": need N = lM for integer l >= 1");
  }
}

enum class BlockKind { universal, residual, cosine_sine, phase, identity };

inline std::string_view kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::universal: return "universal";
    case BlockKind::residual: return "residual";
    case BlockKind::cosine_sine: return "cosine_sine";
    case BlockKind::phase: return "phase";
    case BlockKind::identity: return "identity";
  }
  return "?";
}

inline std::optional<BlockKind> parse_kind(std::string_view s) {
  for (BlockKind k : {BlockKind::universal, BlockKind::residual,
                      BlockKind::cosine_sine, BlockKind::phase,
                      BlockKind::identity}) {
    if (s == kind_name(k)) return k;
  }
  return std::nullopt;
}

/// One module acting on the contiguous window [start, start + size).
/// `start` is 0-based; the JSON form is 1-based.
struct CircuitBlock {
  BlockKind kind = BlockKind::identity;
  int start = 0;
  int size = 0;
  Matrix matrix;               // universal, residual
  std::vector<double> thetas;  // cosine_sine
  std::vector<double> phases;  // phase

  int last() const { return start + size - 1; }
  bool covers(int mode) const { return mode >= start && mode <= last(); }

  bool overlaps(const CircuitBlock& o) const {
    return start <= o.last() && o.start <= last();
  }
  int overlap(const CircuitBlock& o) const {
    return std::max(0, std::min(last(), o.last()) - std::max(start, o.start) + 1);
  }

  /// size x size matrix acting on the window.
  Matrix local_matrix() const {
    switch (kind) {
      case BlockKind::universal:
      case BlockKind::residual:
        return matrix;
      case BlockKind::cosine_sine:
        return cs_matrix(thetas).cast<cplx>();
      case BlockKind::phase: {
        Matrix d = Matrix::Zero(size, size);
        for (int i = 0; i < size; ++i) d(i, i) = std::polar(1.0, phases[i]);
        return d;
      }
      case BlockKind::identity:
        return Matrix::Identity(size, size);
    }
    return {};
  }

  bool operator==(const CircuitBlock& o) const {
    return kind == o.kind && start == o.start && size == o.size &&
           matrix.rows() == o.matrix.rows() &&
           matrix.cols() == o.matrix.cols() &&
           (matrix.size() == 0 || matrix == o.matrix) && thetas == o.thetas &&
           phases == o.phases;
  }

  static CircuitBlock universal(int start, Matrix m) {
    CircuitBlock b;
    b.kind = BlockKind::universal;
    b.start = start;
    b.size = static_cast<int>(m.rows());
    b.matrix = std::move(m);
    return b;
  }
  static CircuitBlock residual(int start, Matrix m) {
    CircuitBlock b = universal(start, std::move(m));
    b.kind = BlockKind::residual;
    return b;
  }
  static CircuitBlock cosine_sine(int start, std::vector<double> thetas) {
    CircuitBlock b;
    b.kind = BlockKind::cosine_sine;
    b.start = start;
    b.size = 2 * static_cast<int>(thetas.size());
    b.thetas = std::move(thetas);
    return b;
  }
  static CircuitBlock phase(int start, std::vector<double> phases) {
    CircuitBlock b;
    b.kind = BlockKind::phase;
    b.start = start;
    b.size = static_cast<int>(phases.size());
    b.phases = std::move(phases);
    return b;
  }
  static CircuitBlock identity(int start, int size) {
    CircuitBlock b;
    b.kind = BlockKind::identity;
    b.start = start;
    b.size = size;
    return b;
  }
};

/// Blocks are stored in application order: blocks.front() acts first, so the
/// represented unitary is blocks.back() * ... * blocks.front().
struct Circuit {
  int n = 0;
  Architecture arch;
  std::vector<CircuitBlock> blocks;

  bool operator==(const Circuit&) const = default;
};

/// Number of two-mode (beam-splitter) equivalents a block stands for.
inline int two_mode_equivalents(const CircuitBlock& b) {
  switch (b.kind) {
    case BlockKind::universal:
      return b.size * (b.size - 1) / 2;
    case BlockKind::residual: {
      const int m = (b.size + 3) / 2;
      return (m - 1) * (m - 2) / 2;
    }
    case BlockKind::cosine_sine:
      return static_cast<int>(b.thetas.size());
    case BlockKind::phase:
    case BlockKind::identity:
      return 0;
  }
  return 0;
}

/// Structural checks; `payload_tol` bounds the unitarity defect of matrix
/// payloads.
inline void validate(const Circuit& c, double payload_tol = kUnitarityTol) {
  if (c.n < 1) throw MalformedCircuitError("circuit must have n >= 1");
  const int m = c.arch.module_size;
  for (std::size_t i = 0; i < c.blocks.size(); ++i) {
    const CircuitBlock& b = c.blocks[i];
    const std::string at = "block " + std::to_string(i) + " (" +
                           std::string(kind_name(b.kind)) + "): ";
    if (b.size < 1 || b.start < 0 || b.last() >= c.n) {
      throw MalformedCircuitError(
          at + "window [" + std::to_string(b.start + 1) + ", " +
          std::to_string(b.last() + 1) + "] does not fit in 1.." +
          std::to_string(c.n));
    }
    switch (b.kind) {
      case BlockKind::universal:
      case BlockKind::residual: {
        if (b.matrix.rows() != b.size || b.matrix.cols() != b.size) {
          throw MalformedCircuitError(at + "payload is not " +
                                      std::to_string(b.size) + "x" +
                                      std::to_string(b.size));
        }
        if (b.kind == BlockKind::universal && b.size != m) {
          throw MalformedCircuitError(at + "universal block must act on M=" +
                                      std::to_string(m) + " modes");
        }
        if (b.kind == BlockKind::residual && b.size != 2 * m - 3) {
          throw MalformedCircuitError(at + "residual block must act on 2M-3=" +
                                      std::to_string(2 * m - 3) + " modes");
        }
        const double dev = unitarity_error(b.matrix);
        if (!(dev <= payload_tol)) {
          throw MalformedCircuitError(at + "payload not unitary (defect " +
                                      std::to_string(dev) + ")");
        }
        break;
      }
      case BlockKind::cosine_sine:
        if (b.size != 2 * static_cast<int>(b.thetas.size()) || b.size != 2 * m) {
          throw MalformedCircuitError(at + "cosine-sine block must act on 2M=" +
                                      std::to_string(2 * m) +
                                      " modes with M angles");
        }
        for (double t : b.thetas) {
          if (!(t >= -1e-12 && t <= kPi / 2 + 1e-12)) {
            throw MalformedCircuitError(at + "angle outside [0, pi/2]");
          }
        }
        break;
      case BlockKind::phase:
        if (static_cast<int>(b.phases.size()) != b.size) {
          throw MalformedCircuitError(at + "phase count differs from size");
        }
        break;
      case BlockKind::identity:
        break;
    }
  }
}

/// u <- embed(block) * u, touching only the block's rows.
inline void apply_block(Matrix& u, const CircuitBlock& b, double scale = 1.0) {
  const Matrix local = b.local_matrix();
  Matrix rows = u.middleRows(b.start, b.size);
  u.middleRows(b.start, b.size) = (scale * local) * rows;
}

inline Matrix embed_block(const CircuitBlock& b, int n) {
  Matrix u = Matrix::Identity(n, n);
  apply_block(u, b);
  return u;
}

/// Product of all blocks in application order.
inline Matrix reconstruct(const Circuit& c) {
  validate(c, kReconstructionTol);
  Matrix u = Matrix::Identity(c.n, c.n);
  for (const CircuitBlock& b : c.blocks) apply_block(u, b);
  return u;
}

}  // namespace ucc
