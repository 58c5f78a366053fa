#pragma once

// Subcommand implementations. Each returns a Table; rows are computed in a
// worker pool and kept in input order.

#include <cstddef>
#include <functional>

#include "hybcav/config.hpp"
#include "hybcav/fom.hpp"
#include "hybcav/output.hpp"

namespace hybcav {

/// Runs fn(0..n-1) on up to `jobs` threads and returns the results in index
/// order. If several calls throw, the exception of the lowest index is
/// rethrown after all workers finish.
std::vector<std::vector<Cell>> parallel_rows(std::size_t n, int jobs,
                                             const std::function<std::vector<Cell>(std::size_t)>& fn);

/// Loss budget and transverse factors of one cavity, ready for fom::evaluate.
/// The outcoupler is the plane (diamond-side) mirror.
fom::CavityDesign make_design(const RunConfig& c, const hybrid::HybridCavity& cav);

/// Per diamond thickness: resonant gap, field ratio, numeric and closed-form
/// linewidth and emission into the ZPL for each roughness value.
Table cmd_sweep_thickness(const RunConfig& c, int jobs);

/// Effective mirror and scattering losses versus diamond thickness, or the
/// diamond-like / air-like boundary versus roughness.
Table cmd_losses(const RunConfig& c, int jobs);

/// Waists, g0, beam radius on the dimple and clipping for both mode solvers.
Table cmd_modes(const RunConfig& c, int jobs);

/// Best outcoupler transmission per vibration level for both mode types.
Table cmd_optimize(const RunConfig& c, int jobs);

/// Standing-wave field through the full stack.
Table cmd_field_profile(const RunConfig& c);

}  // namespace hybcav
