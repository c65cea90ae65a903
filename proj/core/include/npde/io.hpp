#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "npde/grid.hpp"
#include "npde/solver.hpp"
#include "npde/stencil.hpp"

namespace npde {

/// Decimal text with 17 significant digits.
std::string format_double(double x);

/// Comma-separated, '\n' row terminator, no header. 1D fields are one row,
/// 2D fields one row per grid row.
void write_csv(std::ostream& out, const FieldState& field);
void write_csv(std::ostream& out, const Stencil1D& stencil);
void write_csv(std::ostream& out, const Stencil2D& stencil);

/// Reads a field written by write_csv. One row gives a 1D field, n rows of n
/// values a 2D field.
FieldState read_field_csv(std::istream& in);

/// Numeric CSV rows of arbitrary width (blank lines skipped).
std::vector<std::vector<double>> read_csv_rows(std::istream& in);

/// Binary 8-bit PGM (P5), values min-max normalized to 0..255. A constant
/// field maps to 0.
void write_pgm(std::ostream& out, const FieldState& field);

/// Rows of one trajectory slice tagged with `label` (see write_trajectory_csv).
void write_trajectory_slice(std::ostream& out, std::size_t label, const FieldState& slice);

/// Single file, one row per slice: slice index, then the values. For 2D each
/// grid row of a slice is its own line: slice index, row index, values.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

} // namespace npde
