// Command-line surface: load models (files or presets), classify their
// symmetry content, run the invariant pipeline, sweep model paths and dump
// band structures. Formats: human-readable table, CSV, structured JSON.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "zakchain/model_io.hpp"
#include "zakchain/presets.hpp"

using namespace zakchain;

namespace {

// Exit codes, also documented in the README.
enum ExitCode {
  kOk = 0,
  kUnexpected = 1,
  kParseError = 2,
  kSymmetryFailure = 3,
  kGapless = 4,
  kNumericalFailure = 5,
};

struct CommonOptions {
  std::string input;
  std::string preset;
  std::string coeffs;
  int channels = 1;
  std::string azc_class;
  int steps = 2048;
  int kgrid = 1024;
  std::string format = "table";
  std::string output;
  std::string save_model;
  std::string dump_transport;
  bool serial = false;
  Tolerances tol;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool with_steps = true) {
  cmd->add_option("--input", opt.input, "Model file (JSON document)");
  cmd->add_option("--preset", opt.preset,
                  "Preset family: kitaev | multichannel | kitaev-double | class");
  cmd->add_option("--coeffs", opt.coeffs,
                  "Preset coefficients, e.g. \"0:0.5,1:1\" (multichannel: row-major "
                  "m*m reals per offset, e.g. \"0:1 0 0 1,1:0.3 0 0 0\")");
  cmd->add_option("--channels", opt.channels, "Channels m for the multichannel preset");
  cmd->add_option("--class", opt.azc_class,
                  "Tenfold-way label for --preset class (A, AIII, AI, BDI, D, DIII, AII, CII, C, CI)");
  if (with_steps)
    cmd->add_option("--steps", opt.steps, "Transport integration steps M")
        ->check(CLI::Range(64, 1 << 20));
  cmd->add_option("--kgrid", opt.kgrid, "k-grid points for scans")->check(CLI::Range(16, 1 << 20));
  cmd->add_option("--format", opt.format, "Output format: table | csv | structured")
      ->check(CLI::IsMember({"table", "csv", "structured"}));
  cmd->add_option("--output", opt.output, "Write output to this path instead of stdout");
  cmd->add_option("--save-model", opt.save_model, "Also write the resolved model file here");
  cmd->add_flag("--serial", opt.serial, "Disable the OpenMP kernels (serial reference path)");
  cmd->add_option("--tol-herm", opt.tol.herm, "Hermiticity tolerance for input validation");
  cmd->add_option("--tol-sym", opt.tol.sym_rel, "Relative tolerance for symmetry relations");
  cmd->add_option("--tol-gap", opt.tol.gap, "Gap threshold eps_gap");
  cmd->add_option("--tol-unit", opt.tol.unit, "Unitarity tolerance");
  cmd->add_option("--tol-zak", opt.tol.zak, "Trace vs Wilson agreement tolerance");
  cmd->add_option("--tol-int", opt.tol.integer, "Integer rounding tolerance");
}

std::map<int, double> parse_scalar_coeffs(const std::string& text) {
  std::map<int, double> coeffs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ValidationError("coefficient entries must look like n:value");
    coeffs[std::stoi(item.substr(0, colon))] = std::stod(item.substr(colon + 1));
  }
  if (coeffs.empty()) throw ValidationError("empty coefficient list");
  return coeffs;
}

std::map<int, RealMatrix> parse_matrix_coeffs(const std::string& text, int m) {
  std::map<int, RealMatrix> coeffs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ValidationError("coefficient entries must look like n:a11 a12 ...");
    int offset = std::stoi(item.substr(0, colon));
    std::stringstream values(item.substr(colon + 1));
    RealMatrix a(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c)
        if (!(values >> a(r, c)))
          throw ValidationError("multichannel coefficient needs m*m real entries");
    coeffs[offset] = std::move(a);
  }
  if (coeffs.empty()) throw ValidationError("empty coefficient list");
  return coeffs;
}

AZCLabel parse_class_label(const std::string& name) {
  for (AZCLabel l : {AZCLabel::A, AZCLabel::AIII, AZCLabel::AI, AZCLabel::BDI,
                     AZCLabel::D, AZCLabel::DIII, AZCLabel::AII, AZCLabel::CII,
                     AZCLabel::C, AZCLabel::CI})
    if (to_string(l) == name) return l;
  throw ValidationError("unknown symmetry class label: " + name);
}

ModelFile resolve_model(const CommonOptions& opt) {
  if (!opt.input.empty() && !opt.preset.empty())
    throw ValidationError("--input and --preset are mutually exclusive");
  if (!opt.input.empty()) return load_model_file(opt.input, opt.tol);
  if (opt.preset == "kitaev") {
    PresetModel p = kitaev_chain({parse_scalar_coeffs(opt.coeffs)});
    return {std::move(p.model), std::move(p.symmetries)};
  }
  if (opt.preset == "multichannel") {
    PresetModel p = multichannel_kitaev(
        {opt.channels, parse_matrix_coeffs(opt.coeffs, opt.channels)});
    return {std::move(p.model), std::move(p.symmetries)};
  }
  if (opt.preset == "kitaev-double") {
    PresetModel base = kitaev_chain({parse_scalar_coeffs(opt.coeffs)});
    PresetModel p = quaternionic_double(base.model, base.symmetries, opt.tol);
    return {std::move(p.model), std::move(p.symmetries)};
  }
  if (opt.preset == "class") {
    PresetModel p = class_representative(parse_class_label(opt.azc_class), opt.tol);
    return {std::move(p.model), std::move(p.symmetries)};
  }
  if (!opt.preset.empty()) throw ValidationError("unknown preset: " + opt.preset);
  throw ValidationError("either --input or --preset is required");
}

void emit(const CommonOptions& opt, const std::string& text) {
  if (opt.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.output);
  if (!out) throw ValidationError("cannot write output file: " + opt.output);
  out << text;
}

Json config_json(const CommonOptions& opt, Exec exec) {
  Json j;
  j["steps"] = opt.steps;
  j["kgrid"] = opt.kgrid;
  j["parallel"] = exec == Exec::Parallel;
  j["tolerances"] = {{"herm", opt.tol.herm},     {"sym_rel", opt.tol.sym_rel},
                     {"gap", opt.tol.gap},       {"unit", opt.tol.unit},
                     {"zak", opt.tol.zak},       {"integer", opt.tol.integer}};
  return j;
}

std::string config_line(const CommonOptions& opt) {
  std::ostringstream os;
  os << "# config: steps=" << opt.steps << " kgrid=" << opt.kgrid
     << " parallel=" << (opt.serial ? "no" : "yes") << " eps_gap=" << opt.tol.gap
     << " tol_sym=" << opt.tol.sym_rel << " tol_zak=" << opt.tol.zak << "\n";
  return os.str();
}

// ----------------------------------------------------------------------
// classify
// ----------------------------------------------------------------------

int run_classify(const CommonOptions& opt) {
  Exec exec = opt.serial ? Exec::Serial : Exec::Parallel;
  ModelFile file = resolve_model(opt);
  if (!opt.save_model.empty())
    save_model_file(opt.save_model, file.model, file.symmetries);

  std::vector<SymmetryVerification> checks;
  for (const SymmetryOperator& op : file.symmetries.declared()) {
    SymmetryVerification v = verify_symmetry(file.model, op, opt.kgrid, exec, opt.tol);
    checks.push_back(v);
    if (!v.passed)
      throw SymmetryError("declared symmetry " + to_string(op.label) +
                          " fails verification");
  }
  AZCClass cls = classify(file.symmetries, nullptr, opt.tol);
  QuaternionicWitness quat = detect_quaternionic(file.symmetries, opt.tol);

  std::ostringstream os;
  if (opt.format == "structured") {
    Json j;
    j["command"] = "classify";
    j["config"] = config_json(opt, exec);
    Json cj = Json::array();
    for (const SymmetryVerification& v : checks)
      cj.push_back({{"label", to_string(v.label)},
                    {"passed", v.passed},
                    {"max_deviation", v.max_deviation}});
    j["symmetries"] = cj;
    j["class"] = {{"label", to_string(cls.label)},
                  {"k_theory_1d", to_string(cls.k_theory_1d)},
                  {"invariant_support", to_string(cls.invariant_support)}};
    j["quaternionic"] = quat.present;
    os << j.dump(2) << "\n";
  } else if (opt.format == "csv") {
    os << "class,k_theory_1d,invariant_support,quaternionic\n";
    os << to_string(cls.label) << "," << to_string(cls.k_theory_1d) << ","
       << to_string(cls.invariant_support) << "," << (quat.present ? "yes" : "no")
       << "\n";
  } else {
    os << config_line(opt);
    for (const SymmetryVerification& v : checks)
      os << "symmetry " << to_string(v.label) << ": "
         << (v.passed ? "verified" : "FAILED") << " (max deviation "
         << v.max_deviation << ")\n";
    os << "class: " << to_string(cls.label)
       << ", K-theory(1D): " << to_string(cls.k_theory_1d)
       << ", I-support: " << to_string(cls.invariant_support)
       << ", quaternionic: " << (quat.present ? "yes" : "no") << "\n";
  }
  emit(opt, os.str());
  return kOk;
}

// ----------------------------------------------------------------------
// invariant
// ----------------------------------------------------------------------

int run_invariant(const CommonOptions& opt) {
  Exec exec = opt.serial ? Exec::Serial : Exec::Parallel;
  ModelFile file = resolve_model(opt);
  if (!opt.save_model.empty())
    save_model_file(opt.save_model, file.model, file.symmetries);

  InvariantOptions options;
  options.transport_steps = opt.steps;
  options.gap_grid = opt.kgrid;
  options.exec = exec;
  InvariantReport report = compute_invariants(file.model, file.symmetries, options, opt.tol);

  if (!opt.dump_transport.empty()) {
    TransportResult tr = parallel_transport(file.model, opt.steps, exec, opt.tol);
    std::ofstream dump(opt.dump_transport);
    if (!dump) throw ValidationError("cannot write transport dump: " + opt.dump_transport);
    dump << transport_to_json(tr).dump(2) << "\n";
  }

  std::ostringstream os;
  if (opt.format == "structured") {
    Json j = invariant_report_to_json(report);
    j["command"] = "invariant";
    j["config"] = config_json(opt, exec);
    os << j.dump(2) << "\n";
  } else if (opt.format == "csv") {
    os << "class,quaternionic,gap_width,zak_total,zak_occupied,z2,oracle_winding,"
          "parity_consistent\n"
       << to_string(report.azc_class.label) << ","
       << (report.quaternionic.present ? "yes" : "no") << "," << report.gap.gap_width
       << "," << report.zak.total_trace << "," << report.zak.occupied_trace << ","
       << to_string(report.z2) << ",";
    if (report.oracle_winding) os << *report.oracle_winding;
    os << ",";
    if (report.parity_consistent) os << (*report.parity_consistent ? "yes" : "no");
    os << "\n";
  } else {
    os << config_line(opt);
    os << "class: " << to_string(report.azc_class.label)
       << ", K-theory(1D): " << to_string(report.azc_class.k_theory_1d)
       << ", I-support: " << to_string(report.azc_class.invariant_support)
       << ", quaternionic: " << (report.quaternionic.present ? "yes" : "no") << "\n";
    os << "gap: width " << report.gap.gap_width << " (min |E| = "
       << report.gap.min_abs_energy << " at k = " << report.gap.k_at_min
       << "), occupied rank " << report.gap.occupied_rank << "\n";
    for (const SymmetryVerification& v : report.symmetry_checks)
      os << "symmetry " << to_string(v.label) << ": verified (max deviation "
         << v.max_deviation << ")\n";
    os << "zak total: " << report.zak.total_trace << " (Wilson "
       << report.zak.total_wilson << ")\n";
    os << "zak occupied: " << report.zak.occupied_trace << " (Wilson "
       << report.zak.occupied_wilson << ")\n";
    os << "z2 invariant: " << to_string(report.z2);
    if (report.z2 == Z2Value::NotApplicable)
      os << "  [Zak phase is not gauge-invariant in classes A, AI, AII; "
            "raw value reported for reference]";
    os << "\n";
    if (report.oracle_winding) {
      os << "oracle winding: " << *report.oracle_winding;
      if (report.parity_consistent)
        os << " (parity " << (*report.parity_consistent ? "consistent" : "INCONSISTENT")
           << ")";
      os << "\n";
    }
    os << "diagnostics: unitarity " << report.unitarity_defect << ", intertwining "
       << report.intertwining_defect << ", holonomy reconstruction "
       << report.holonomy_reconstruction << ", [X,P0] " << report.x_commutator << "\n";
  }
  emit(opt, os.str());
  return kOk;
}

// ----------------------------------------------------------------------
// sweep
// ----------------------------------------------------------------------

struct SweepCliOptions {
  CommonOptions common;
  std::string from_path;
  std::string to_path;
  std::string coeffs_from;
  std::string coeffs_to;
  int samples = 101;
};

int run_sweep(const SweepCliOptions& opt) {
  Exec exec = opt.common.serial ? Exec::Serial : Exec::Parallel;

  std::optional<ModelFile> from, to;
  if (!opt.from_path.empty()) from = load_model_file(opt.from_path, opt.common.tol);
  if (!opt.to_path.empty()) to = load_model_file(opt.to_path, opt.common.tol);
  if (!from != !to)
    throw ValidationError("sweep needs both --from and --to model files");
  if (!from) {
    if (opt.common.preset != "kitaev" || opt.coeffs_from.empty() || opt.coeffs_to.empty())
      throw ValidationError(
          "sweep needs --from/--to files or --preset kitaev with --coeffs-from/--coeffs-to");
    PresetModel a = kitaev_chain({parse_scalar_coeffs(opt.coeffs_from)});
    PresetModel b = kitaev_chain({parse_scalar_coeffs(opt.coeffs_to)});
    from = ModelFile{std::move(a.model), std::move(a.symmetries)};
    to = ModelFile{std::move(b.model), std::move(b.symmetries)};
  }
  if (from->model.internal_dim() != to->model.internal_dim())
    throw ValidationError("sweep endpoints differ in internal dimension");

  ModelPath path{std::move(from->model), std::move(to->model),
                 std::move(from->symmetries), opt.samples};
  SweepOptions options;
  options.transport_steps = opt.common.steps;
  options.gap_grid = opt.common.kgrid;
  options.exec = exec;
  SweepResult result = sweep(path, options, opt.common.tol);

  std::ostringstream os;
  if (opt.common.format == "structured") {
    Json j = sweep_result_to_json(result);
    j["command"] = "sweep";
    j["config"] = config_json(opt.common, exec);
    os << j.dump(2) << "\n";
  } else {
    // The CSV is the primary output; the table format adds a summary line.
    os << "t,gap,z2\n";
    for (const SweepSample& s : result.samples) {
      os << s.t << "," << s.gap_width << ",";
      if (!s.gapped)
        os << "gapless";
      else if (!s.resolved)
        os << "unresolved";
      else
        os << to_string(s.z2);
      os << "\n";
    }
    if (opt.common.format == "table") {
      os << "# transitions: " << result.transitions.size();
      for (const Transition& t : result.transitions)
        os << "  [" << t.t_lower << ", " << t.t_upper << "] (at t = " << t.location()
           << ")";
      os << "\n# invariant constant per gapped segment: "
         << (result.invariant_constant_per_segment ? "yes" : "NO") << "\n";
    }
  }
  emit(opt.common, os.str());
  return kOk;
}

// ----------------------------------------------------------------------
// spectrum
// ----------------------------------------------------------------------

int run_spectrum(const CommonOptions& opt) {
  Exec exec = opt.serial ? Exec::Serial : Exec::Parallel;
  ModelFile file = resolve_model(opt);
  if (!opt.save_model.empty())
    save_model_file(opt.save_model, file.model, file.symmetries);

  auto bands = band_structure(file.model, opt.kgrid, exec, opt.tol);
  std::ostringstream os;
  if (opt.format == "structured") {
    Json j;
    j["command"] = "spectrum";
    j["config"] = config_json(opt, exec);
    Json rows = Json::array();
    for (const auto& [k, energies] : bands) {
      Json row;
      row["k"] = k;
      row["E"] = std::vector<double>(energies.data(), energies.data() + energies.size());
      rows.push_back(std::move(row));
    }
    j["bands"] = std::move(rows);
    os << j.dump(2) << "\n";
  } else {
    os << "k";
    for (int i = 0; i < file.model.internal_dim(); ++i) os << ",E_" << (i + 1);
    os << "\n";
    for (const auto& [k, energies] : bands) {
      os << k;
      for (Eigen::Index i = 0; i < energies.size(); ++i) os << "," << energies(i);
      os << "\n";
    }
  }
  emit(opt, os.str());
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zak-phase and tenfold-way invariant toolkit for 1D tight-binding chains"};
  app.require_subcommand(1);

  CommonOptions classify_opt, invariant_opt, spectrum_opt;
  SweepCliOptions sweep_opt;

  CLI::App* classify_cmd =
      app.add_subcommand("classify", "Verify declared symmetries and report the AZC class");
  add_common_flags(classify_cmd, classify_opt, false);

  CLI::App* invariant_cmd =
      app.add_subcommand("invariant", "Gap, Zak phases, Z2 invariant and winding oracles");
  add_common_flags(invariant_cmd, invariant_opt);
  invariant_cmd->add_option("--dump-transport", invariant_opt.dump_transport,
                            "Write transport unitaries and X to this path");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Gap and invariant along a linear model path");
  add_common_flags(sweep_cmd, sweep_opt.common);
  sweep_cmd->add_option("--from", sweep_opt.from_path, "Path endpoint model file (t = 0)");
  sweep_cmd->add_option("--to", sweep_opt.to_path, "Path endpoint model file (t = 1)");
  sweep_cmd->add_option("--coeffs-from", sweep_opt.coeffs_from,
                        "Kitaev coefficients at t = 0 (with --preset kitaev)");
  sweep_cmd->add_option("--coeffs-to", sweep_opt.coeffs_to,
                        "Kitaev coefficients at t = 1 (with --preset kitaev)");
  sweep_cmd->add_option("--samples", sweep_opt.samples, "Path sample count")
      ->check(CLI::Range(2, 100000));

  CLI::App* spectrum_cmd =
      app.add_subcommand("spectrum", "Band energies over the k-grid as CSV");
  add_common_flags(spectrum_cmd, spectrum_opt, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify_cmd->parsed()) return run_classify(classify_opt);
    if (invariant_cmd->parsed()) return run_invariant(invariant_opt);
    if (sweep_cmd->parsed()) return run_sweep(sweep_opt);
    if (spectrum_cmd->parsed()) return run_spectrum(spectrum_opt);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const SymmetryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSymmetryFailure;
  } catch (const GaplessError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGapless;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnexpected;
  }
  return kUnexpected;
}
