#include "oqo/report.hpp"

#include <ostream>

#include "oqo/format.hpp"

namespace oqo {

nlohmann::json to_json(const SpreadReport& r)
{
    return {
        {"dq", round_significant(r.dq)},
        {"dp", round_significant(r.dp)},
        {"DQ", round_significant(r.DQ)},
        {"DP", round_significant(r.DP)},
        {"lhs", round_significant(r.lhs)},
        {"rhs", round_significant(r.rhs)},
        {"margin", round_significant(r.margin)},
        {"holds", r.holds},
        {"equality", r.equality},
    };
}

nlohmann::json to_json(const PhaseSpectrumReport& r)
{
    nlohmann::json eig = nlohmann::json::array();
    for (Index k = 0; k < r.eigenvalues.size(); ++k) {
        eig.push_back(round_significant(r.eigenvalues(k)));
    }
    return {
        {"eigenvalues", eig},
        {"excess", round_significant(r.excess)},
        {"n_max", r.config.n_max},
        {"smoothing", to_string(r.config.smoothing)},
        {"phi0", round_significant(r.config.phi0)},
        {"dim", r.dim},
        {"max_residual", round_significant(r.max_residual)},
        {"hermiticity", round_significant(r.hermiticity)},
        {"histogram", r.histogram},
    };
}

namespace {

void write_entries(std::ostream& os, const FockOperator& m, const std::string& prefix)
{
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            const cdouble z = m(i, j);
            if (z == cdouble(0.0)) {
                continue;
            }
            os << prefix << i << ',' << j << ',' << format_number(z.real()) << ',' << format_number(z.imag()) << '\n';
        }
    }
}

}  // namespace

void write_matrix_csv(std::ostream& os, const FockOperator& m, bool header)
{
    if (header) {
        os << "row,col,re,im\n";
    }
    write_entries(os, m, "");
}

void write_phasor_csv(std::ostream& os, const PhasorSet& set)
{
    os << "n,row,col,re,im\n";
    for (int n = -set.n_max; n <= set.n_max; ++n) {
        write_entries(os, set[n], std::to_string(n) + ",");
    }
}

}  // namespace oqo
