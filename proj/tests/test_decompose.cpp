#include <catch_amalgamated.hpp>

#include <map>
#include <string>

#include "support.hpp"
#include "ucc/decompose.hpp"
#include "ucc/metrics.hpp"

using namespace ucc;
using testing::distance;

namespace {

struct Case {
  ArchTag tag;
  int n;
  int m;
};

std::vector<Case> round_trip_cases() {
  std::vector<Case> cs;
  for (ArchTag t : {ArchTag::reck, ArchTag::clements, ArchTag::deguise}) {
    for (int n : {2, 3, 4, 5, 8, 9, 16}) cs.push_back({t, n, 2});
  }
  for (ArchTag t : {ArchTag::elim_rect, ArchTag::elim_triangular}) {
    for (auto [n, m] : {std::pair{2, 2}, {5, 2}, {3, 3}, {5, 3}, {7, 3}, {13, 3},
                        {7, 4}, {13, 4}, {9, 5}, {21, 5}}) {
      cs.push_back({t, n, m});
    }
  }
  for (ArchTag t : {ArchTag::csd_rect, ArchTag::csd_triangular}) {
    for (auto [n, m] : {std::pair{2, 2}, {4, 2}, {8, 2}, {3, 3}, {12, 3},
                        {8, 4}, {16, 4}, {25, 5}, {10, 1}}) {
      cs.push_back({t, n, m});
    }
  }
  return cs;
}

std::map<BlockKind, int> kind_counts(const Circuit& c) {
  std::map<BlockKind, int> k;
  for (const auto& b : c.blocks) ++k[b.kind];
  return k;
}

// Per-mode count of non-phase blocks.
std::vector<int> mode_counts(const Circuit& c) {
  std::vector<int> v(static_cast<std::size_t>(c.n), 0);
  for (const auto& b : c.blocks) {
    if (b.kind == BlockKind::phase || b.kind == BlockKind::identity) continue;
    for (int j = b.start; j <= b.last(); ++j) ++v[static_cast<std::size_t>(j)];
  }
  return v;
}

// Product written as a plain loop over embedded blocks.
Matrix slow_reconstruct(const Circuit& c) {
  Matrix u = Matrix::Identity(c.n, c.n);
  for (const auto& b : c.blocks) u = testing::naive_product(embed_block(b, c.n), u);
  return u;
}

}  // namespace

TEST_CASE("phase migration identity", "[migrate]") {
  SECTION("closed form at zero phases") {
    const auto [t, p, a, b] = migrate_phase(0.4, 0.0, 0.0, 0.0);
    CHECK(t == 0.4);
    CHECK(p == Catch::Approx(kPi));
    CHECK(a == Catch::Approx(kPi));
    CHECK(b == 0.0);
  }
  SECTION("random angles") {
    testing::AngleSource src(99);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double th = src.angle();
      const double ph = src.angle();
      const double al = src.angle();
      const double be = src.angle();
      const auto [t2, p2, a2, b2] = migrate_phase(th, ph, al, be);
      const Matrix lhs = testing::reference_givens(2, 0, 1, th, ph, true) *
                         testing::reference_diag({al, be});
      const Matrix rhs = testing::reference_diag({a2, b2}) *
                         testing::reference_givens(2, 0, 1, t2, p2, false);
      worst = std::max(worst, distance(lhs, rhs));
    }
    CHECK(worst < 1e-13);
  }
}

TEST_CASE("every architecture reconstructs its input", "[roundtrip]") {
  for (const Case& c : round_trip_cases()) {
    const Architecture arch(c.tag, c.m);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const UnitaryMatrix u = haar_random(c.n, seed * 31 + static_cast<std::uint64_t>(c.n));
      const DecompositionResult r = decompose(u, arch);
      INFO(tag_name(c.tag) << " n=" << c.n << " m=" << c.m << " seed=" << seed);
      CHECK(r.residual_error < 1e-9);
      CHECK(distance(slow_reconstruct(r.circuit), u.matrix()) < 1e-9);
      CHECK(r.circuit.arch == arch);
    }
  }
}

TEST_CASE("reconstruction holds up to 64 modes", "[roundtrip][large]") {
  const std::vector<Case> big{{ArchTag::clements, 64, 2}, {ArchTag::reck, 64, 2},
                              {ArchTag::deguise, 64, 2},  {ArchTag::csd_rect, 64, 8},
                              {ArchTag::csd_triangular, 64, 4},
                              {ArchTag::elim_rect, 64, 8}, {ArchTag::elim_triangular, 64, 4}};
  for (const Case& c : big) {
    const DecompositionResult r = decompose(haar_random(c.n, 5), Architecture(c.tag, c.m));
    INFO(tag_name(c.tag));
    CHECK(r.residual_error < 1e-9);
  }
}

TEST_CASE("identity input gives trivial blocks", "[roundtrip]") {
  // Nulling-based decompositions of the identity never rotate. Phase
  // migration may still leave pi shifts, so two-mode blocks are only
  // required to be diagonal; cosine-sine angles must vanish, while the
  // SVD factors around them are only fixed up to cancelling unitaries.
  for (const Case& c : round_trip_cases()) {
    const DecompositionResult r =
        decompose(UnitaryMatrix::identity(c.n), Architecture(c.tag, c.m));
    INFO(tag_name(c.tag) << " n=" << c.n << " m=" << c.m);
    CHECK(r.residual_error < 1e-12);
    for (const CircuitBlock& b : r.circuit.blocks) {
      if (b.kind == BlockKind::cosine_sine) {
        for (double t : b.thetas) CHECK(std::abs(t) < 1e-12);
      }
      if (is_csd(c.tag) || b.kind == BlockKind::phase) continue;
      if (b.kind == BlockKind::universal || b.kind == BlockKind::residual) {
        Matrix off = b.matrix;
        off.diagonal().setZero();
        CHECK(testing::max_entry(off) < 1e-12);
        if (c.tag != ArchTag::clements) {
          CHECK(distance(b.matrix, Matrix::Identity(b.size, b.size)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("decomposition is deterministic", "[roundtrip]") {
  for (const Case& c : round_trip_cases()) {
    const UnitaryMatrix u = haar_random(c.n, 77);
    const Architecture arch(c.tag, c.m);
    CHECK(decompose(u, arch).circuit == decompose(u, arch).circuit);
  }
}

TEST_CASE("incompatible sizes and bad inputs are rejected", "[errors]") {
  CHECK_THROWS_AS(decompose(haar_random(6, 1), Architecture(ArchTag::elim_rect, 3)),
                  DimensionError);
  CHECK_THROWS_AS(decompose(haar_random(7, 1), Architecture(ArchTag::csd_rect, 3)),
                  DimensionError);
  CHECK_THROWS_AS(decompose(haar_random(1, 1), Architecture(ArchTag::clements)),
                  DimensionError);
  try {
    decompose(haar_random(8, 1), Architecture(ArchTag::elim_triangular, 4));
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("N = k(M-1)+1") != std::string::npos);
  }
}

TEST_CASE("Reck: nearest-neighbour factors in shrinking rounds", "[reck]") {
  const DecompositionResult r = decompose_reck(haar_random(5, 3));
  REQUIRE(r.factor_log.size() == 10);
  for (const auto& lf : r.factor_log) {
    CHECK(lf.factor.n == lf.factor.m + 1);
    CHECK(lf.factor.side == Side::right);
  }
  // Rounds: one per nulled row, bottom row first.
  std::vector<int> sizes;
  for (int row = 4; row >= 1; --row) sizes.push_back(row);
  int k = 0;
  for (int s : sizes) {
    for (int i = 0; i < s; ++i, ++k) {
      CHECK(r.factor_log[static_cast<std::size_t>(k)].factor.m == i);
      CHECK(r.factor_log[static_cast<std::size_t>(k)].step == k + 1);
    }
  }
  auto kinds = kind_counts(r.circuit);
  CHECK(kinds.at(BlockKind::universal) == 10);
  CHECK(kinds.at(BlockKind::phase) == 1);
  CHECK(r.circuit.blocks.back().kind == BlockKind::phase);

  const DecompositionResult two = decompose_reck(haar_random(2, 0));
  CHECK(two.factor_log.size() == 1);
  CHECK(kind_counts(two.circuit).at(BlockKind::universal) == 1);

  for (int n = 3; n <= 9; ++n) {
    const auto counts = mode_counts(decompose_reck(haar_random(n, 1)).circuit);
    CHECK(*std::max_element(counts.begin(), counts.end()) == 2 * n - 3);
  }
}

TEST_CASE("Clements: per-mode counts and depth", "[clements]") {
  const DecompositionResult r = decompose_clements(haar_random(5, 4));
  CHECK(r.factor_log.size() == 10);
  CHECK(mode_counts(r.circuit) == std::vector<int>{3, 5, 5, 5, 2});
  CHECK(r.circuit.blocks.back().kind == BlockKind::phase);
  for (const auto& lf : r.factor_log) CHECK(lf.factor.n == lf.factor.m + 1);

  for (int n = 3; n <= 12; ++n) {
    const auto counts = mode_counts(decompose_clements(haar_random(n, 2)).circuit);
    INFO("n=" << n);
    // Each block covers two modes and the inner modes carry n each.
    CHECK(counts.front() + counts.back() == n);
    CHECK(std::abs(counts.front() - counts.back()) <= 1);
    for (int j = 1; j + 1 < n; ++j) CHECK(counts[static_cast<std::size_t>(j)] == n);
  }
  const auto nine = mode_counts(decompose_clements(haar_random(9, 8)).circuit);
  CHECK(*std::max_element(nine.begin(), nine.end()) == 9);

  CHECK(decompose_clements(haar_random(2, 0)).factor_log.size() == 1);
}

TEST_CASE("de Guise: triangular rounds without a phase layer", "[deguise]") {
  const DecompositionResult r = decompose_deguise(haar_random(5, 6));
  const auto& b = r.circuit.blocks;
  REQUIRE(b.size() == 10);
  for (const auto& blk : b) CHECK(blk.kind == BlockKind::universal);
  // Application order: the (4,5) block, then rounds of 2, 3 and 4 blocks
  // climbing from the diagonal towards the last two modes.
  const std::vector<int> starts{3, 2, 3, 1, 2, 3, 0, 1, 2, 3};
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i].start == starts[i]);
  CHECK(r.factor_log.size() == 9);
}

TEST_CASE("triangular elimination: block windows for 7 modes", "[elim]") {
  const DecompositionResult r = decompose_elim_triangular(haar_random(7, 1), 3);
  const auto& b = r.circuit.blocks;
  // 0-based starts of the nine blocks in application order.
  const std::vector<std::pair<BlockKind, int>> expect{
      {BlockKind::universal, 4}, {BlockKind::universal, 2}, {BlockKind::universal, 0},
      {BlockKind::residual, 3},  {BlockKind::residual, 1},  {BlockKind::universal, 4},
      {BlockKind::universal, 2}, {BlockKind::residual, 3},  {BlockKind::universal, 4}};
  REQUIRE(b.size() == expect.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(b[i].kind == expect[i].first);
    CHECK(b[i].start == expect[i].second);
    CHECK(b[i].size == 3);
  }
  for (const auto& lf : r.factor_log) CHECK(lf.factor.side == Side::right);
}

TEST_CASE("rectangular elimination: blocks and sides for 7 modes", "[elim]") {
  const DecompositionResult r = decompose_elim_rect(haar_random(7, 2), 3);
  const auto& b = r.circuit.blocks;
  // Nulling order A..I; right blocks act in that order, left ones reversed
  // after them.  Application order: A E F G H I D C B.
  const std::vector<std::pair<BlockKind, int>> expect{
      {BlockKind::universal, 4}, {BlockKind::universal, 0}, {BlockKind::residual, 1},
      {BlockKind::universal, 2}, {BlockKind::residual, 3},  {BlockKind::universal, 4},
      {BlockKind::universal, 0}, {BlockKind::residual, 1},  {BlockKind::universal, 2}};
  REQUIRE(b.size() == expect.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(b[i].kind == expect[i].first);
    CHECK(b[i].start == expect[i].second);
  }
  // Sides per nulling step: A (3 entries) right, B, C, D left, rest right.
  std::string sides;
  for (const auto& lf : r.factor_log) sides += lf.factor.side == Side::right ? 'r' : 'l';
  CHECK(sides == "rrr" "lll" "l" "lll" "rrr" "r" "rrr" "r" "rrr");
}

TEST_CASE("elimination block counts", "[elim]") {
  for (int m : {2, 3, 4, 5}) {
    for (int k = 1; k <= 6; ++k) {
      const int n = k * (m - 1) + 1;
      if (n < 2) continue;
      for (ArchTag t : {ArchTag::elim_rect, ArchTag::elim_triangular}) {
        auto kinds = kind_counts(decompose(haar_random(n, 9), Architecture(t, m)).circuit);
        INFO(tag_name(t) << " m=" << m << " k=" << k);
        CHECK(kinds[BlockKind::universal] == k * (k + 1) / 2);
        CHECK(kinds[BlockKind::residual] == k * (k - 1) / 2);
        CHECK(kinds[BlockKind::phase] == 0);
      }
    }
  }
}

namespace {

struct Labelled {
  int row;
  int col;
  char block;
  char side;
};

// Order in which the strictly upper entries of a 12x12 unitary are nulled for
// M = 3, with the 2M-mode block that nulls each and its side.
const Labelled kTwelveModeOrder[] = {
    {0, 11, 'A', 'R'}, {0, 10, 'A', 'R'}, {0, 9, 'A', 'R'}, {0, 8, 'A', 'R'},
    {0, 7, 'A', 'R'}, {1, 11, 'A', 'R'}, {1, 10, 'A', 'R'}, {1, 9, 'A', 'R'},
    {1, 8, 'A', 'R'}, {2, 11, 'A', 'R'}, {2, 10, 'A', 'R'}, {2, 9, 'A', 'R'},
    {3, 11, 'A', 'R'}, {3, 10, 'A', 'R'}, {4, 11, 'A', 'R'}, {5, 11, 'B', 'L'},
    {6, 11, 'B', 'L'}, {7, 11, 'B', 'L'}, {4, 10, 'B', 'L'}, {5, 10, 'B', 'L'},
    {6, 10, 'B', 'L'}, {3, 9, 'B', 'L'}, {4, 9, 'B', 'L'}, {5, 9, 'B', 'L'},
    {3, 8, 'B', 'L'}, {4, 8, 'B', 'L'}, {3, 7, 'B', 'L'}, {2, 8, 'C', 'L'},
    {1, 7, 'C', 'L'}, {2, 7, 'C', 'L'}, {0, 6, 'C', 'L'}, {1, 6, 'C', 'L'},
    {2, 6, 'C', 'L'}, {0, 5, 'C', 'L'}, {1, 5, 'C', 'L'}, {0, 4, 'C', 'L'},
    {0, 3, 'D', 'R'}, {0, 2, 'D', 'R'}, {0, 1, 'D', 'R'}, {1, 4, 'D', 'R'},
    {1, 3, 'D', 'R'}, {1, 2, 'D', 'R'}, {2, 5, 'D', 'R'}, {2, 4, 'D', 'R'},
    {2, 3, 'D', 'R'}, {3, 5, 'D', 'R'}, {3, 4, 'D', 'R'}, {4, 5, 'D', 'R'},
    {3, 6, 'E', 'R'}, {4, 7, 'E', 'R'}, {4, 6, 'E', 'R'}, {5, 8, 'E', 'R'},
    {5, 7, 'E', 'R'}, {5, 6, 'E', 'R'}, {6, 8, 'E', 'R'}, {6, 7, 'E', 'R'},
    {7, 8, 'E', 'R'}, {6, 9, 'F', 'R'}, {7, 10, 'F', 'R'}, {7, 9, 'F', 'R'},
    {8, 11, 'F', 'R'}, {8, 10, 'F', 'R'}, {8, 9, 'F', 'R'}, {9, 11, 'F', 'R'},
    {9, 10, 'F', 'R'}, {10, 11, 'F', 'R'},
};

}  // namespace

TEST_CASE("rectangular CSD: stage-one nulling order for 12 modes", "[csd]") {
  auto plans = detail::csd_rect_plans(12, 3);
  std::vector<Labelled> got;
  char letter = 'A';
  for (auto& p : plans) {
    detail::order_entries(p);
    for (const auto& e : p.entries) {
      got.push_back({e.row, e.col, letter, p.side == Side::right ? 'R' : 'L'});
    }
    ++letter;
  }
  REQUIRE(got.size() == std::size(kTwelveModeOrder));
  for (std::size_t i = 0; i < got.size(); ++i) {
    const Labelled& want = kTwelveModeOrder[i];
    INFO("step " << i + 1);
    CHECK(got[i].row == want.row);
    CHECK(got[i].col == want.col);
    CHECK(got[i].block == want.block);
    CHECK(got[i].side == want.side);
  }
  // Window of each stage-one block.
  const std::vector<int> starts{6, 3, 0, 0, 3, 6};
  REQUIRE(plans.size() == starts.size());
  for (std::size_t i = 0; i < plans.size(); ++i) {
    CHECK(plans[i].start == starts[i]);
    CHECK(plans[i].size == 6);
  }
}

TEST_CASE("CSD block counts", "[csd]") {
  for (int m : {1, 2, 3, 4}) {
    for (int l = 1; l <= 5; ++l) {
      for (ArchTag t : {ArchTag::csd_rect, ArchTag::csd_triangular}) {
        const int n = l * m;
        if (n < 2) continue;
        const DecompositionResult r = decompose(haar_random(n, 4), Architecture(t, m));
        auto kinds = kind_counts(r.circuit);
        INFO(tag_name(t) << " m=" << m << " l=" << l);
        CHECK(kinds[BlockKind::universal] == l * l);
        CHECK(kinds[BlockKind::cosine_sine] == l * (l - 1) / 2);
        CHECK(kinds[BlockKind::phase] == 0);
      }
    }
  }
}

TEST_CASE("triangular CSD: layer sizes of the recursion", "[csd]") {
  // Each recursion level over j partitions adds 2j-1 universal blocks and
  // j-1 cosine-sine blocks; levels are applied innermost first.
  const DecompositionResult r = decompose_csd_triangular(haar_random(8, 12), 2);
  const auto& b = r.circuit.blocks;
  int uni = 0;
  int cs = 0;
  std::vector<std::pair<int, int>> levels;
  // Split at cosine-sine blocks whose window starts at partition 0..2.
  for (const auto& blk : b) {
    if (blk.kind == BlockKind::universal) ++uni;
    if (blk.kind == BlockKind::cosine_sine) ++cs;
  }
  CHECK(uni == 16);
  CHECK(cs == 6);
  // The first-applied block sits on the last partition and the final
  // block of the outermost level as well.
  CHECK(b.front().start == 6);
  CHECK(b.back().start == 6);
  // Cosine-sine windows, application order.
  std::vector<int> cs_starts;
  for (const auto& blk : b) {
    if (blk.kind == BlockKind::cosine_sine) cs_starts.push_back(blk.start);
  }
  CHECK(cs_starts == std::vector<int>{4, 2, 4, 0, 2, 4});
}
