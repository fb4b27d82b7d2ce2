#pragma once

#include <json.hpp>

#include <variant>

#include "band_matrix.hpp"
#include "dyson.hpp"
#include "lattice_model.hpp"
#include "metric_engine.hpp"

namespace qhlat {

using BandMatrixAny = std::variant<BandMatrix<Rational>, BandMatrix<double>>;

/// Interchange format for band matrices:
///   { "window": N, "scalar": "rational"|"float",
///     "diagonals": { "<offset>": [entries...] } }
/// Rational entries are strings "p/q" (just "p" for integers) and round-trip
/// bit-exactly; float entries are plain JSON numbers.
nlohmann::json band_to_json(const BandMatrix<Rational>& m);
nlohmann::json band_to_json(const BandMatrix<double>& m);
nlohmann::json band_to_json(const BandMatrixAny& m);
BandMatrixAny band_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const LatticeModel& model);
LatticeModel model_from_json(const nlohmann::json& j);

nlohmann::json metric_to_json(const MetricSpec& spec);
MetricSpec metric_from_json(const nlohmann::json& j);

nlohmann::json dyson_to_json(const DysonMap& map);

nlohmann::json locality_to_json(const LocalityReport& report);

} // namespace qhlat
