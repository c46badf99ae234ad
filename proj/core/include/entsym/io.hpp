#pragma once

#include <string>
#include <variant>

#include "entsym/state.hpp"
#include "entsym/symmetry.hpp"

namespace entsym::io {

// File formats. Complex entries are [re, im] pairs of doubles.
//   pure state:     {"dims": [2, 2], "amplitudes": [[re, im], ...]}
//   density matrix: {"dims": [2, 2], "matrix": [[[re, im], ...], ...]}
//   operator:       {"matrix": [[[re, im], ...], ...]}
//   Kraus map:      {"in_dim": 2, "out_dim": 2, "ops": [matrix, ...]}
// Writers emit every number with 17 significant digits.

using StateFile = std::variant<PureState, DensityMatrix>;

PureState load_state(const std::string& path);
DensityMatrix load_density(const std::string& path);
StateFile load_state_file(const std::string& path);
Matrix load_operator(const std::string& path);
KrausMap load_kraus(const std::string& path);

void save_state(const std::string& path, const PureState& state);
void save_density(const std::string& path, const DensityMatrix& rho);
void save_operator(const std::string& path, const Matrix& m);
void save_kraus(const std::string& path, const KrausMap& map);

/// %.17g rendering used for every number this library writes.
std::string format_double(double v);

} // namespace entsym::io
