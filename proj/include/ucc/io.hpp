#pragma once

// JSON forms of matrices, circuits and layer schedules. Mode indices are
// 1-based on disk. Doubles are written in shortest round-trip form, so
// parse(dump(x)) == x bit for bit.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ucc/circuit.hpp"
#include "ucc/metrics.hpp"

namespace ucc {

using json = nlohmann::json;

namespace detail {

class Reader {
 public:
  explicit Reader(const json& j, std::string path = "") : j_(j), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw SchemaError((path_.empty() ? "/" : path_) + ": " + what);
  }

  Reader at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    auto it = j_.find(key);
    if (it == j_.end()) fail("missing key \"" + key + "\"");
    return Reader(*it, path_ + "/" + key);
  }
  bool has(const std::string& key) const {
    return j_.is_object() && j_.contains(key);
  }
  Reader at(std::size_t i) const { return Reader(j_.at(i), path_ + "/" + std::to_string(i)); }

  std::size_t array_size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }
  double number() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::vector<double> numbers() const {
    std::vector<double> v(array_size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = at(i).number();
    return v;
  }
  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
};

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("/: invalid JSON: ") + e.what());
  }
}

}  // namespace detail

inline json matrix_to_json(const Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    json c = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  return {{"n", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

namespace detail {

inline Matrix read_matrix(const Reader& r) {
  const int n = r.at("n").integer();
  if (n < 1) r.at("n").fail("expected n >= 1");
  Matrix m(n, n);
  for (const char* part : {"re", "im"}) {
    const Reader rows = r.at(part);
    if (rows.array_size() != static_cast<std::size_t>(n)) {
      rows.fail("expected " + std::to_string(n) + " rows");
    }
    for (int i = 0; i < n; ++i) {
      const Reader row = rows.at(static_cast<std::size_t>(i));
      if (row.array_size() != static_cast<std::size_t>(n)) {
        row.fail("expected " + std::to_string(n) + " columns");
      }
      for (int j = 0; j < n; ++j) {
        const double v = row.at(static_cast<std::size_t>(j)).number();
        if (part[0] == 'r') {
          m(i, j) = cplx(v, 0.0);
        } else {
          m(i, j) = cplx(m(i, j).real(), v);
        }
      }
    }
  }
  return m;
}

}  // namespace detail

inline Matrix matrix_from_json(const json& j) {
  return detail::read_matrix(detail::Reader(j));
}

inline json block_to_json(const CircuitBlock& b) {
  json j = {{"kind", std::string(kind_name(b.kind))},
            {"start", b.start + 1},
            {"size", b.size}};
  switch (b.kind) {
    case BlockKind::universal:
    case BlockKind::residual:
      j["matrix"] = matrix_to_json(b.matrix);
      break;
    case BlockKind::cosine_sine:
      j["thetas"] = b.thetas;
      break;
    case BlockKind::phase:
      j["phases"] = b.phases;
      break;
    case BlockKind::identity:
      break;
  }
  return j;
}

namespace detail {

inline CircuitBlock read_block(const Reader& r) {
  CircuitBlock b;
  const Reader kind = r.at("kind");
  const auto k = parse_kind(kind.string());
  if (!k) kind.fail("unknown block kind \"" + kind.string() + "\"");
  b.kind = *k;
  b.start = r.at("start").integer() - 1;
  b.size = r.at("size").integer();
  switch (b.kind) {
    case BlockKind::universal:
    case BlockKind::residual:
      b.matrix = read_matrix(r.at("matrix"));
      break;
    case BlockKind::cosine_sine:
      b.thetas = r.at("thetas").numbers();
      break;
    case BlockKind::phase:
      b.phases = r.at("phases").numbers();
      break;
    case BlockKind::identity:
      break;
  }
  return b;
}

inline std::pair<int, Architecture> read_header(const Reader& r) {
  const Reader ver = r.at("version");
  if (ver.integer() != 1) ver.fail("unsupported version");
  const int n = r.at("n").integer();
  const Reader tag = r.at("arch").at("tag");
  const auto t = parse_arch_tag(tag.string());
  if (!t) tag.fail("unknown architecture \"" + tag.string() + "\"");
  return {n, Architecture(*t, r.at("arch").at("m").integer())};
}

inline json arch_json(const Architecture& a) {
  return {{"tag", std::string(tag_name(a.tag))}, {"m", a.module_size}};
}

}  // namespace detail

inline json circuit_to_json(const Circuit& c) {
  json blocks = json::array();
  for (const CircuitBlock& b : c.blocks) blocks.push_back(block_to_json(b));
  return {{"version", 1},
          {"n", c.n},
          {"arch", detail::arch_json(c.arch)},
          {"blocks", std::move(blocks)}};
}

/// Throws SchemaError for shape/type problems and MalformedCircuitError for
/// structurally invalid blocks.
inline Circuit circuit_from_json(const json& j) {
  const detail::Reader r(j);
  auto [n, arch] = detail::read_header(r);
  Circuit c{n, arch, {}};
  const detail::Reader blocks = r.at("blocks");
  for (std::size_t i = 0; i < blocks.array_size(); ++i) {
    c.blocks.push_back(detail::read_block(blocks.at(i)));
  }
  validate(c, kReconstructionTol);
  return c;
}

inline std::string serialize(const Circuit& c) { return circuit_to_json(c).dump(); }

inline Circuit deserialize(const std::string& text) {
  return circuit_from_json(detail::parse_text(text));
}

inline json schedule_to_json(const LayerSchedule& s) {
  json layers = json::array();
  for (const Layer& l : s.layers) {
    json blocks = json::array();
    for (const CircuitBlock& b : l.blocks) blocks.push_back(block_to_json(b));
    layers.push_back({{"kind", std::string(layer_kind_name(l.kind))},
                      {"padded", l.padded},
                      {"blocks", std::move(blocks)}});
  }
  return {{"version", 1},
          {"n", s.n},
          {"arch", detail::arch_json(s.arch)},
          {"layers", std::move(layers)}};
}

inline LayerSchedule schedule_from_json(const json& j) {
  const detail::Reader r(j);
  auto [n, arch] = detail::read_header(r);
  LayerSchedule s{n, arch, {}};
  const detail::Reader layers = r.at("layers");
  for (std::size_t i = 0; i < layers.array_size(); ++i) {
    const detail::Reader lr = layers.at(i);
    Layer l;
    const detail::Reader kind = lr.at("kind");
    const std::string k = kind.string();
    if (k == "universal_layer") {
      l.kind = LayerKind::universal_layer;
    } else if (k == "interaction_layer") {
      l.kind = LayerKind::interaction_layer;
    } else {
      kind.fail("unknown layer kind \"" + k + "\"");
    }
    l.padded = lr.at("padded").integer();
    const detail::Reader blocks = lr.at("blocks");
    for (std::size_t b = 0; b < blocks.array_size(); ++b) {
      l.blocks.push_back(detail::read_block(blocks.at(b)));
    }
    s.layers.push_back(std::move(l));
  }
  validate(flatten(s), kReconstructionTol);
  return s;
}

/// Whole-file helpers. I/O failures raise std::ios_base::failure.
inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << text;
  if (!out) throw std::ios_base::failure("cannot write " + path);
}

inline Matrix load_matrix(const std::string& path) {
  return matrix_from_json(detail::parse_text(read_file(path)));
}

inline Circuit load_circuit(const std::string& path) {
  return deserialize(read_file(path));
}

}  // namespace ucc
