#include "zakchain/model_io.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace zakchain {

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ValidationError(origin + ": " + what);
}

void reject_unknown_keys(const Json& j, std::initializer_list<const char*> known,
                         const std::string& origin, const std::string& where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* key : known)
      if (item.key() == key) ok = true;
    if (!ok) fail(origin, "unknown key \"" + item.key() + "\" in " + where);
  }
}

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError(context + ": complex entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& context) {
  if (!j.is_array() || j.empty())
    throw ValidationError(context + ": matrix must be a non-empty array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
      throw ValidationError(context + ": ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[r][c], context);
  }
  return m;
}

ModelFile load_model(std::istream& in, const std::string& origin,
                     const Tolerances& tol) {
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    std::ostringstream os;
    os << origin << ":" << line << ": " << e.what();
    throw ValidationError(os.str());
  }

  reject_unknown_keys(doc, {"N", "R", "hoppings", "symmetries"}, origin, "model document");
  if (!doc.contains("N") || !doc.contains("R") || !doc.contains("hoppings"))
    fail(origin, "model document needs fields N, R and hoppings");
  const int n = doc["N"].get<int>();
  const int range = doc["R"].get<int>();

  std::map<int, Matrix> hoppings;
  for (const Json& entry : doc["hoppings"]) {
    reject_unknown_keys(entry, {"offset", "matrix"}, origin, "hopping entry");
    if (!entry.contains("offset") || !entry.contains("matrix"))
      fail(origin, "hopping entries need offset and matrix");
    const int offset = entry["offset"].get<int>();
    if (std::abs(offset) > range) {
      std::ostringstream os;
      os << "hopping offset " << offset << " outside the declared range R = " << range;
      fail(origin, os.str());
    }
    if (hoppings.count(offset)) {
      std::ostringstream os;
      os << "duplicate hopping offset " << offset;
      fail(origin, os.str());
    }
    std::ostringstream ctx;
    ctx << origin << ": hopping offset " << offset;
    Matrix m = matrix_from_json(entry["matrix"], ctx.str());
    if (m.rows() != n || m.cols() != n)
      fail(origin, "hopping matrix dimension does not match N");
    hoppings[offset] = std::move(m);
  }

  ModelFile file{HoppingModel(n, range, std::move(hoppings), tol), SymmetrySet{}};

  if (doc.contains("symmetries")) {
    const Json& sym = doc["symmetries"];
    reject_unknown_keys(sym, {"T", "C", "S"}, origin, "symmetry block");
    auto read_op = [&](const char* key, bool want_antiunitary,
                       SymmetryOperator (*make)(Matrix)) -> std::optional<SymmetryOperator> {
      if (!sym.contains(key)) return std::nullopt;
      const Json& entry = sym[key];
      reject_unknown_keys(entry, {"matrix", "antiunitary"}, origin, "symmetry entry");
      if (!entry.contains("matrix"))
        fail(origin, std::string("symmetry ") + key + " needs a matrix");
      Matrix u = matrix_from_json(entry["matrix"], std::string(origin) + ": symmetry " + key);
      if (u.rows() != n || u.cols() != n)
        fail(origin, std::string("symmetry ") + key + " matrix dimension does not match N");
      if (entry.contains("antiunitary") &&
          entry["antiunitary"].get<bool>() != want_antiunitary)
        fail(origin, std::string("symmetry ") + key +
                         (want_antiunitary ? " must be antiunitary" : " must be unitary"));
      SymmetryOperator op = make(std::move(u));
      op.validate(tol);
      return op;
    };
    file.symmetries.time_reversal = read_op("T", true, &SymmetryOperator::time_reversal);
    file.symmetries.particle_hole = read_op("C", true, &SymmetryOperator::particle_hole);
    file.symmetries.chiral = read_op("S", false, &SymmetryOperator::chiral);
  }
  return file;
}

ModelFile load_model_file(const std::string& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file: " + path);
  return load_model(in, path, tol);
}

Json model_to_json(const HoppingModel& model, const SymmetrySet& symmetries) {
  Json doc;
  doc["N"] = model.internal_dim();
  doc["R"] = model.range();
  Json hoppings = Json::array();
  for (const auto& [j, a] : model.hoppings()) {
    Json entry;
    entry["offset"] = j;
    entry["matrix"] = matrix_to_json(a);
    hoppings.push_back(std::move(entry));
  }
  doc["hoppings"] = std::move(hoppings);

  if (!symmetries.empty()) {
    Json sym;
    auto write_op = [&](const char* key, const std::optional<SymmetryOperator>& op) {
      if (!op) return;
      Json entry;
      entry["matrix"] = matrix_to_json(op->matrix);
      entry["antiunitary"] = op->antiunitary;
      sym[key] = std::move(entry);
    };
    write_op("T", symmetries.time_reversal);
    write_op("C", symmetries.particle_hole);
    write_op("S", symmetries.chiral);
    doc["symmetries"] = std::move(sym);
  }
  return doc;
}

void save_model_file(const std::string& path, const HoppingModel& model,
                     const SymmetrySet& symmetries) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write model file: " + path);
  out << model_to_json(model, symmetries).dump(2) << "\n";
}

namespace {

// Diagnostics are rounded to 12 significant digits; keeps reports readable
// and the golden comparisons meaningful.
double rounded(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  std::ostringstream os;
  os.precision(12);
  os << v;
  return std::stod(os.str());
}

} // namespace

Json gap_to_json(const GapReport& gap) {
  Json j;
  j["gapped"] = gap.gapped;
  j["gap_width"] = rounded(gap.gap_width);
  j["min_abs_energy"] = rounded(gap.min_abs_energy);
  j["k_at_min"] = rounded(gap.k_at_min);
  j["occupied_rank"] = gap.occupied_rank;
  return j;
}

Json invariant_report_to_json(const InvariantReport& report) {
  Json j;
  j["class"] = {{"label", to_string(report.azc_class.label)},
                {"k_theory_1d", to_string(report.azc_class.k_theory_1d)},
                {"invariant_support", to_string(report.azc_class.invariant_support)}};
  j["quaternionic"] = {{"present", report.quaternionic.present}};
  if (report.quaternionic.present)
    j["quaternionic"]["witness"] = to_string(report.quaternionic.witness);
  j["gap"] = gap_to_json(report.gap);

  Json checks = Json::array();
  for (const SymmetryVerification& v : report.symmetry_checks) {
    checks.push_back({{"label", to_string(v.label)},
                      {"passed", v.passed},
                      {"max_deviation", rounded(v.max_deviation)}});
  }
  j["symmetries"] = std::move(checks);

  j["zak"] = {{"total", rounded(report.zak.total_trace)},
              {"total_wilson", rounded(report.zak.total_wilson)},
              {"occupied", rounded(report.zak.occupied_trace)},
              {"occupied_wilson", rounded(report.zak.occupied_wilson)}};
  if (report.z2 == Z2Value::NotApplicable)
    j["z2"] = nullptr;
  else
    j["z2"] = report.z2 == Z2Value::One ? 1 : 0;
  if (report.oracle_winding) j["oracle_winding"] = *report.oracle_winding;
  if (report.parity_consistent) j["parity_consistent"] = *report.parity_consistent;

  j["diagnostics"] = {{"transport_steps", report.transport_steps},
                      {"gap_grid", report.gap_grid},
                      {"unitarity_defect", rounded(report.unitarity_defect)},
                      {"intertwining_defect", rounded(report.intertwining_defect)},
                      {"holonomy_reconstruction", rounded(report.holonomy_reconstruction)},
                      {"x_commutator", rounded(report.x_commutator)}};
  return j;
}

Json transport_to_json(const TransportResult& tr) {
  Json j;
  j["steps"] = tr.steps();
  j["occupied_rank"] = tr.occupied_rank;
  Json samples = Json::array();
  for (int i = 0; i <= tr.steps(); ++i) {
    Json row;
    row["k"] = tr.grid[i];
    row["T"] = matrix_to_json(tr.transport[i]);
    samples.push_back(std::move(row));
  }
  j["samples"] = std::move(samples);
  j["X"] = matrix_to_json(tr.log.x);
  j["initial_basis"] = matrix_to_json(tr.initial_basis);
  return j;
}

Json sweep_result_to_json(const SweepResult& result) {
  Json j;
  Json samples = Json::array();
  for (const SweepSample& s : result.samples) {
    Json row;
    row["t"] = rounded(s.t);
    row["gap"] = rounded(s.gap_width);
    if (!s.gapped)
      row["z2"] = "gapless";
    else if (!s.resolved)
      row["z2"] = "unresolved";
    else
      row["z2"] = s.z2 == Z2Value::NotApplicable
                      ? Json(nullptr)
                      : Json(s.z2 == Z2Value::One ? 1 : 0);
    samples.push_back(std::move(row));
  }
  j["samples"] = std::move(samples);
  Json transitions = Json::array();
  for (const Transition& t : result.transitions)
    transitions.push_back({{"t_lower", rounded(t.t_lower)},
                           {"t_upper", rounded(t.t_upper)},
                           {"location", rounded(t.location())}});
  j["transitions"] = std::move(transitions);
  j["invariant_constant_per_segment"] = result.invariant_constant_per_segment;
  return j;
}

} // namespace zakchain
