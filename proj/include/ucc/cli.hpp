#pragma once

// Command-line front end. run() is what tools/ucc.cpp calls; tests call it
// directly with their own streams.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ucc/decompose.hpp"
#include "ucc/io.hpp"
#include "ucc/loss.hpp"
#include "ucc/metrics.hpp"

namespace ucc::cli {

enum Exit : int {
  kOk = 0,
  kIoError = 1,
  kInvalid = 2,
  kIncompatible = 3,
  kMismatch = 4,
};

namespace detail {

inline std::string format_g12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline json cost_json(const CostReport& r) {
  return {{"beamsplitter_count", r.beamsplitter_count},
          {"phase_count", r.phase_count},
          {"universal_depth", r.universal_depth},
          {"interaction_depth", r.interaction_depth},
          {"per_mode_element_counts", r.per_mode_element_counts},
          {"max_per_mode", r.max_per_mode}};
}

inline ArchTag arch_from_flag(const std::string& s) {
  const auto t = parse_arch_tag(s);
  if (!t) {
    throw SchemaError("--arch: unknown architecture \"" + s +
                      "\" (expected reck, clements, deguise, csd-tri, "
                      "elim-tri, csd-rect or elim-rect)");
  }
  return *t;
}

inline void emit(const std::string& path, const std::string& text,
                 std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

struct Options {
  // decompose / haar
  std::string arch;
  int m = 2;
  std::string input;
  bool haar = false;
  int n = 0;
  std::uint64_t seed = 0;
  std::string output;
  std::string matrix_out;
  // verify / stats / schedule
  std::string circuit;
  std::string matrix;
  double tol = kReconstructionTol;
  // fidelity-sweep
  std::vector<std::string> archs;
  std::vector<int> ns;
  std::vector<double> etas;
  std::vector<double> losses;
  int trials = 100;
  bool lossy_identities = false;
};

inline int cmd_decompose(const Options& o, std::ostream& out, std::ostream& err) {
  const Architecture arch(arch_from_flag(o.arch), o.m);
  Matrix u;
  if (o.haar) {
    if (o.n < 1) throw SchemaError("--n: required with --haar and must be >= 1");
    check_dimensions(arch, o.n);
    u = haar_random(o.n, o.seed).matrix();
  } else {
    if (o.input.empty()) throw SchemaError("need --input FILE or --haar");
    u = load_matrix(o.input);
  }
  const UnitaryMatrix um(u);
  const DecompositionResult r = decompose(um, arch);
  if (!o.matrix_out.empty()) write_file(o.matrix_out, matrix_to_json(u).dump() + "\n");
  const std::string text = serialize(r.circuit) + "\n";
  const CostReport cost = cost_report(r.circuit);
  json summary = {{"residual_error", r.residual_error}, {"cost", cost_json(cost)}};
  if (o.output.empty() || o.output == "-") {
    out << text;
    err << summary.dump() << "\n";
  } else {
    write_file(o.output, text);
    out << summary.dump() << "\n";
  }
  return kOk;
}

inline int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const Circuit c = load_circuit(o.circuit);
  const Matrix u = load_matrix(o.matrix);
  if (u.rows() != c.n) {
    throw SchemaError("matrix has n=" + std::to_string(u.rows()) +
                      " but circuit has n=" + std::to_string(c.n));
  }
  const double e = max_abs_diff(reconstruct(c), u);
  const bool ok = e < o.tol;
  out << json{{"error", e}, {"tol", o.tol}, {"ok", ok}}.dump() << "\n";
  if (!ok) err << "reconstruction differs from matrix by " << e << "\n";
  return ok ? kOk : kMismatch;
}

inline int cmd_stats(const Options& o, std::ostream& out, std::ostream&) {
  const Circuit c = load_circuit(o.circuit);
  out << cost_json(cost_report(c)).dump() << "\n";
  return kOk;
}

inline int cmd_schedule(const Options& o, std::ostream& out, std::ostream& err) {
  const LayerSchedule s = schedule_layers(load_circuit(o.circuit));
  emit(o.output, schedule_to_json(s).dump() + "\n", out);
  int u = 0;
  int i = 0;
  for (const Layer& l : s.layers) (l.kind == LayerKind::universal_layer ? u : i)++;
  err << u << " universal and " << i << " interaction layers\n";
  return kOk;
}

inline int cmd_haar(const Options& o, std::ostream& out, std::ostream&) {
  if (o.n < 1) throw SchemaError("--n: must be >= 1");
  emit(o.output, matrix_to_json(haar_random(o.n, o.seed).matrix()).dump() + "\n",
       out);
  return kOk;
}

inline int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names = o.archs;
  if (!o.arch.empty()) names.insert(names.begin(), o.arch);
  if (names.empty()) throw SchemaError("need --arch or --archs");
  if (o.ns.empty()) throw SchemaError("--n: grid must not be empty");
  std::vector<double> etas = o.etas;
  for (double l : o.losses) etas.push_back(1.0 - l);
  if (etas.empty()) etas.push_back(1.0);
  if (o.trials < 1) throw SchemaError("--trials: must be >= 1");

  std::vector<ArchTag> tags;
  for (const auto& a : names) tags.push_back(arch_from_flag(a));
  for (ArchTag t : tags) {
    for (int n : o.ns) check_dimensions(Architecture(t, o.m), n);
  }
  for (double e : etas) {
    LossModel probe;
    probe.eta = e;
    probe.check();
  }

  std::ostringstream csv;
  csv << "arch,n,m,eta,trials,seed,mean_fidelity,std_fidelity\n";
  for (ArchTag t : tags) {
    for (int n : o.ns) {
      for (double e : etas) {
        LossModel loss;
        loss.eta = e;
        loss.lossless_identities = !o.lossy_identities;
        const FidelityStats s = monte_carlo_fidelity(n, o.m, t, loss, o.trials, o.seed);
        csv << cli_name(t) << ',' << n << ',' << Architecture(t, o.m).module_size
            << ',' << format_g12(e) << ',' << o.trials << ',' << o.seed << ','
            << format_g12(s.mean) << ',' << format_g12(s.std) << '\n';
        err << cli_name(t) << " n=" << n << " eta=" << format_g12(e)
            << " mean=" << format_g12(s.mean) << "\n";
      }
    }
  }
  emit(o.output, csv.str(), out);
  return kOk;
}

}  // namespace detail

/// Parses and runs one command. Never throws; returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  detail::Options o;
  CLI::App app{"Decompose unitaries into linear-optical circuits"};
  app.require_subcommand(1);

  auto* dec = app.add_subcommand("decompose", "Decompose a unitary into a circuit");
  dec->add_option("--arch", o.arch, "Architecture")->required();
  dec->add_option("--m", o.m, "Module size M");
  dec->add_option("--input", o.input, "Matrix JSON file");
  dec->add_flag("--haar", o.haar, "Decompose a Haar-random unitary");
  dec->add_option("--n", o.n, "Mode count for --haar");
  dec->add_option("--seed", o.seed, "Seed for --haar");
  dec->add_option("-o,--output", o.output, "Circuit JSON output (default stdout)");
  dec->add_option("--matrix-out", o.matrix_out, "Also write the input matrix");

  auto* ver = app.add_subcommand("verify", "Check a circuit against a matrix");
  ver->add_option("--circuit", o.circuit)->required();
  ver->add_option("--matrix", o.matrix)->required();
  ver->add_option("--tol", o.tol, "Max-abs tolerance");

  auto* st = app.add_subcommand("stats", "Print the cost report of a circuit");
  st->add_option("--circuit", o.circuit)->required();

  auto* sch = app.add_subcommand("schedule", "Group a circuit into layers");
  sch->add_option("--circuit", o.circuit)->required();
  sch->add_option("-o,--output", o.output);

  auto* sw = app.add_subcommand("fidelity-sweep", "Monte Carlo loss fidelity");
  sw->add_option("--arch", o.arch);
  sw->add_option("--archs", o.archs)->delimiter(',');
  sw->add_option("--m", o.m);
  sw->add_option("--n", o.ns)->delimiter(',')->required();
  sw->add_option("--eta", o.etas, "Transmissivities")->delimiter(',');
  sw->add_option("--loss", o.losses, "Losses (1 - eta)")->delimiter(',');
  sw->add_option("--trials", o.trials);
  sw->add_option("--seed", o.seed);
  sw->add_flag("--lossy-identities", o.lossy_identities,
               "Apply loss to identity padding as well");
  sw->add_option("-o,--output", o.output, "CSV output (default stdout)");

  auto* hr = app.add_subcommand("haar", "Write a Haar-random unitary");
  hr->add_option("--n", o.n)->required();
  hr->add_option("--seed", o.seed);
  hr->add_option("-o,--output", o.output);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInvalid;
  }

  try {
    if (dec->parsed()) return detail::cmd_decompose(o, out, err);
    if (ver->parsed()) return detail::cmd_verify(o, out, err);
    if (st->parsed()) return detail::cmd_stats(o, out, err);
    if (sch->parsed()) return detail::cmd_schedule(o, out, err);
    if (sw->parsed()) return detail::cmd_sweep(o, out, err);
    if (hr->parsed()) return detail::cmd_haar(o, out, err);
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kIncompatible;
  } catch (const UnsupportedArchitectureError& e) {
    err << "error: " << e.what() << "\n";
    return kIncompatible;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ucc::cli
