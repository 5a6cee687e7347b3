// JSON file formats for states, MPS, MPU tensors and correction tables.
#pragma once

#include "scartower/translate.hpp"

#include <json.hpp>

namespace scartower {

using Json = nlohmann::json;

// {"site_dims": [...], "amplitudes": [[re, im], ...]} in mixed-radix order, wire 0 most significant.
Json state_to_json(const StateVector& s);
StateVector state_from_json(const Json& j);

// {"boundary": "open"|"periodic", "left": [[re, im]...], "right": [...],
//  "sites": [{"site": j, "tensor": [phys][left][right] of [re, im]}]}
Json mps_to_json(const MPS& mps);
MPS mps_from_json(const Json& j);

// {"name", "phys_dim", "bond_dim", "tensor": [out][in][left][right] of [re, im]}
Json mpu_to_json(const MPU& u);
MPU mpu_from_json(const Json& j);

Json correction_table_to_json(const CorrectionTable& t);

Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace scartower
