#pragma once

#include <iosfwd>
#include <nlohmann/json_fwd.hpp>
#include <string>

#include "zakchain/invariants.hpp"
#include "zakchain/sweep.hpp"

namespace zakchain {

using Json = nlohmann::json;

/// A model file: internal dimension, range, hopping list and an optional
/// symmetry block. Complex entries are [re, im] pairs throughout.
struct ModelFile {
  HoppingModel model;
  SymmetrySet symmetries;
};

/// Parses a model document. Enforces A_{-j} = A_j^dagger, rejects offsets
/// beyond the range and unknown keys, and validates the symmetry block
/// (energy/momentum signs are implied by the label, the antiunitary flag is
/// checked against it). Parse errors carry the line number.
ModelFile load_model(std::istream& in, const std::string& origin = "<input>",
                     const Tolerances& tol = {});
ModelFile load_model_file(const std::string& path, const Tolerances& tol = {});

/// Serializes a model (with its symmetry block) so that reloading
/// reproduces bit-identical matrix entries.
Json model_to_json(const HoppingModel& model, const SymmetrySet& symmetries);
void save_model_file(const std::string& path, const HoppingModel& model,
                     const SymmetrySet& symmetries);

Json gap_to_json(const GapReport& gap);
Json invariant_report_to_json(const InvariantReport& report);
Json sweep_result_to_json(const SweepResult& result);

/// Transport samples and the holonomy logarithm as a plain text document
/// (k values plus matrices with [re, im] entries) for external plotting.
Json transport_to_json(const TransportResult& tr);

/// Matrix <-> JSON helpers ([re, im] entry encoding).
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& context);

} // namespace zakchain
