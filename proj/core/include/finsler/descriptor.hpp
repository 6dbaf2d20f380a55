#pragma once

// JSON descriptors for catalog Lagrangians:
//
//   { "name": "...", "type": "brinkmann", "dim": 4,
//     "params": { "H": "x2-y2" }, "cone_ref": [1, 1, 0, 0],
//     "region": [[-1, 1], ...] }
//
// "name", "dim", "params", "cone_ref" and "region" are optional. Custom
// compiled Lagrangians are added with register_lagrangian_type.

#include "finsler/lagrangian.hpp"
#include "finsler/report.hpp"

#include <functional>
#include <string>
#include <vector>

namespace finsler {

/// Builds a Lagrangian from the "params" object and the requested dimension
/// (0 when the descriptor does not give one). Throws SchemaError on bad params.
using LagrangianFactory = std::function<Lagrangian(const Json& params, int dim)>;

void register_lagrangian_type(const std::string& type, LagrangianFactory factory);
std::vector<std::string> registered_types();

/// Throws SchemaError for malformed descriptors; constructor failures
/// propagate as ConstructionError.
Lagrangian lagrangian_from_descriptor(const Json& descriptor);

}  // namespace finsler
