#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "roofkit/maximal.hpp"
#include "roofkit/states.hpp"

namespace roofkit {

/// Contents of a state file:
///   {"kind": "density" | "pure", "dims": [n] or [nA, nB], "data": ...}
/// where data is an array of [re, im] pairs (pure) or an array of rows of them (density).
struct StateFile {
  std::variant<PureState, DensityMatrix> state;
  std::optional<Dims> dims;  // present for two-entry "dims"

  bool is_pure() const noexcept { return std::holds_alternative<PureState>(state); }
  DensityMatrix density() const;
  /// Throws PreconditionFailed when the file carries a single dimension.
  BipartiteState bipartite() const;
};

/// Parses and validates; throws ParseError for malformed JSON or layout and the
/// states-module error (NotHermitian, NotNormalized, ...) for invalid contents.
StateFile parse_state(const std::string& text);
StateFile read_state_file(const std::filesystem::path& path);

std::string state_to_json(const PureState& psi, std::optional<Dims> dims = std::nullopt);
std::string state_to_json(const DensityMatrix& rho, std::optional<Dims> dims = std::nullopt);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// {"target": <state>, "members": [{"weight": w, "state": <pure state>}, ...]}
std::string ensemble_to_json(const Ensemble& ensemble, std::optional<Dims> dims = std::nullopt);
/// Inverse of ensemble_to_json; members must reconstruct the target.
Ensemble parse_ensemble(const std::string& text);

/// {"verdict", "reason", "residual", "detail", "witness": [{"weight", "state"}...] | null}
std::string certificate_to_json(const Certificate& cert, std::optional<Dims> dims = std::nullopt);

}  // namespace roofkit
