#ifndef OQO_REPORT_HPP
#define OQO_REPORT_HPP

// Structured export of reports and operator dumps.

#include <iosfwd>

#include <json.hpp>

#include "oqo/phase.hpp"
#include "oqo/qp.hpp"

namespace oqo {

/// Fields dq, dp, DQ, DP, lhs, rhs, margin (12 significant digits), plus
/// the boolean flags holds and equality.
nlohmann::json to_json(const SpreadReport& r);

/// Fields eigenvalues[], excess, n_max, smoothing, phi0, dim,
/// max_residual, hermiticity, histogram[].
nlohmann::json to_json(const PhaseSpectrumReport& r);

/// Rows "row,col,re,im" for every nonzero entry.
void write_matrix_csv(std::ostream& os, const FockOperator& m, bool header = true);

/// Same dump for every member of the set, prefixed by the phasor order: "n,row,col,re,im".
void write_phasor_csv(std::ostream& os, const PhasorSet& set);

}  // namespace oqo

#endif  // OQO_REPORT_HPP
