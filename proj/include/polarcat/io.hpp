// SPDX-License-Identifier: Apache-2.0
//
// Serialization: density operators and state vectors as JSON, quadrature
// datasets / Wigner grids / Bloch maps as CSV. Field names and column layouts
// are part of the external contract and fixed exactly.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "polarcat/analysis.hpp"
#include "polarcat/fock.hpp"
#include "polarcat/tomography.hpp"

namespace polarcat {

/// { "modes": [...], "cutoffs": [...], "matrix": [[[re,im], ...], ...] }
nlohmann::json density_to_json(const DensityOperator& rho);
DensityOperator density_from_json(const nlohmann::json& j);

/// { "modes": [...], "cutoffs": [...], "amps": [[re,im], ...] }
nlohmann::json fock_to_json(const FockVector& psi);
FockVector fock_from_json(const nlohmann::json& j);

/// CSV with header `theta,x`, 17 significant digits.
std::string quadratures_to_csv(const std::vector<QuadratureSample>& samples);
std::vector<QuadratureSample> quadratures_from_csv(const std::string& text);

/// CSV with header `x,p,w`, row-major over the grid.
std::string wigner_to_csv(const Eigen::MatrixXd& w, const WignerGrid& grid);

/// CSV with header `theta,phi,fidelity`.
std::string bloch_map_to_csv(const std::vector<BlochPoint>& map);

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace polarcat
