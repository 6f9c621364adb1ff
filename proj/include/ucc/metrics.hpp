#pragma once

// Cost accounting and temporal layering of circuits.

#include <algorithm>
#include <map>
#include <vector>

#include "ucc/circuit.hpp"

namespace ucc {

struct CostReport {
  int beamsplitter_count = 0;
  int phase_count = 0;
  int universal_depth = 0;
  int interaction_depth = 0;  // residual or cosine-sine blocks
  std::vector<int> per_mode_element_counts;
  int max_per_mode = 0;

  bool operator==(const CostReport&) const = default;
};

inline bool is_interaction(BlockKind k) {
  return k == BlockKind::residual || k == BlockKind::cosine_sine;
}

/// Depths are the largest number of blocks of a kind acting on one mode.
inline CostReport cost_report(const Circuit& c) {
  validate(c);
  CostReport r;
  r.per_mode_element_counts.assign(static_cast<std::size_t>(c.n), 0);
  std::vector<int> uni(static_cast<std::size_t>(c.n), 0);
  std::vector<int> inter(static_cast<std::size_t>(c.n), 0);
  for (const CircuitBlock& b : c.blocks) {
    r.beamsplitter_count += two_mode_equivalents(b);
    switch (b.kind) {
      case BlockKind::universal:
      case BlockKind::residual:
        r.phase_count += two_mode_equivalents(b);
        break;
      case BlockKind::phase:
        r.phase_count += b.size;
        break;
      default:
        break;
    }
    if (b.kind == BlockKind::phase || b.kind == BlockKind::identity) continue;
    for (int j = b.start; j <= b.last(); ++j) {
      const auto u = static_cast<std::size_t>(j);
      ++r.per_mode_element_counts[u];
      if (b.kind == BlockKind::universal) ++uni[u];
      if (is_interaction(b.kind)) ++inter[u];
    }
  }
  auto max_of = [](const std::vector<int>& v) {
    return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
  };
  r.universal_depth = max_of(uni);
  r.interaction_depth = max_of(inter);
  r.max_per_mode = max_of(r.per_mode_element_counts);
  return r;
}

enum class LayerKind { universal_layer, interaction_layer };

inline std::string_view layer_kind_name(LayerKind k) {
  return k == LayerKind::universal_layer ? "universal_layer" : "interaction_layer";
}

struct Layer {
  LayerKind kind = LayerKind::universal_layer;
  std::vector<CircuitBlock> blocks;  // application order
  int padded = 0;

  bool operator==(const Layer&) const = default;
};

struct LayerSchedule {
  int n = 0;
  Architecture arch;
  std::vector<Layer> layers;

  std::vector<int> padded_counts() const {
    std::vector<int> out;
    for (const Layer& l : layers) out.push_back(l.padded);
    return out;
  }

  bool operator==(const LayerSchedule&) const = default;
};

namespace detail {

// Windows a layer of the given kind is padded to.
inline std::vector<std::pair<int, int>> slot_windows(const Architecture& a,
                                                     int n, LayerKind kind) {
  std::vector<std::pair<int, int>> w;
  const int m = a.module_size;
  if (is_elimination(a.tag)) {
    const int m1 = m - 1;
    const int k = elimination_k(n, m);
    if (kind == LayerKind::universal_layer) {
      for (int t = 0; t < k; ++t) w.emplace_back(t * m1, m);
    } else {
      for (int t = 0; t + 1 < k; ++t) w.emplace_back(t * m1 + 1, 2 * m - 3);
    }
  } else {
    for (int t = 0; t < csd_l(n, m); ++t) w.emplace_back(t * m, m);
  }
  return w;
}

inline void pad_layer(Layer& layer, const Architecture& a, int n) {
  for (auto [start, size] : slot_windows(a, n, layer.kind)) {
    const bool taken = std::any_of(
        layer.blocks.begin(), layer.blocks.end(), [&](const CircuitBlock& b) {
          return b.start <= start + size - 1 && start <= b.last();
        });
    if (is_elimination(a.tag)) {
      const bool exact = std::any_of(
          layer.blocks.begin(), layer.blocks.end(),
          [&](const CircuitBlock& b) { return b.start == start; });
      if (exact) continue;
    } else if (taken) {
      continue;
    }
    layer.blocks.push_back(CircuitBlock::identity(start, size));
    ++layer.padded;
  }
  // Elimination windows chain through shared boundary modes, so the lower
  // block of a chained pair must act first.
  const bool descending = is_elimination(a.tag);
  std::stable_sort(layer.blocks.begin(), layer.blocks.end(),
                   [descending](const CircuitBlock& x, const CircuitBlock& y) {
                     return descending ? x.start > y.start : x.start < y.start;
                   });
}

}  // namespace detail

/// Groups the blocks of a modular circuit into alternating universal and
/// interaction layers, placing every block as late as possible; the last
/// layer is a universal one. Missing slots are filled with identities.
inline LayerSchedule schedule_layers(const Circuit& c) {
  if (is_two_mode(c.arch.tag)) {
    throw UnsupportedArchitectureError(
        std::string("layer scheduling needs a modular architecture, got ") +
        std::string(tag_name(c.arch.tag)));
  }
  validate(c);
  const bool chains = is_elimination(c.arch.tag);
  const std::size_t nb = c.blocks.size();
  std::vector<int> slot(nb, 0);
  for (std::size_t i = nb; i-- > 0;) {
    const CircuitBlock& x = c.blocks[i];
    if (x.kind == BlockKind::phase) {
      throw UnsupportedArchitectureError(
          "cannot schedule a circuit with an explicit phase layer (block " +
          std::to_string(i) + ")");
    }
    int s = 0;
    for (std::size_t j = i + 1; j < nb; ++j) {
      const CircuitBlock& y = c.blocks[j];
      if (!x.overlaps(y)) continue;
      const bool chained = chains && x.kind == y.kind && x.overlap(y) == 1 &&
                           x.start == y.last();
      s = std::max(s, chained ? slot[j] : slot[j] + 1);
    }
    const int parity = is_interaction(x.kind) ? 1 : 0;
    if (s % 2 != parity) ++s;
    slot[i] = s;
  }

  LayerSchedule out{c.n, c.arch, {}};
  const int top = nb == 0 ? 0 : *std::max_element(slot.begin(), slot.end());
  for (int s = top; s >= 0; --s) {
    Layer l;
    l.kind = s % 2 == 0 ? LayerKind::universal_layer : LayerKind::interaction_layer;
    for (std::size_t i = 0; i < nb; ++i) {
      if (slot[i] == s) l.blocks.push_back(c.blocks[i]);
    }
    out.layers.push_back(std::move(l));
  }
  for (Layer& l : out.layers) detail::pad_layer(l, c.arch, c.n);
  return out;
}

/// Concatenates the layers back into one circuit.
inline Circuit flatten(const LayerSchedule& s) {
  Circuit c{s.n, s.arch, {}};
  for (const Layer& l : s.layers) {
    for (const CircuitBlock& b : l.blocks) c.blocks.push_back(b);
  }
  return c;
}

}  // namespace ucc
