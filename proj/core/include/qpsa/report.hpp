#pragma once

#include <iosfwd>
#include <string>

#include "qpsa/crisscross.hpp"
#include "qpsa/minimize.hpp"

namespace qpsa::report {

/// 12-significant-digit rendering used by all human-readable tables.
std::string num(double v);
std::string num(Complex z);

/// Iterate table: iteration index and abscissa estimate per row.
void print_psa_table(std::ostream& os, const PsaOutcome& out);

/// Outer-iteration table: nu, distance to the final minimizer, reduced and
/// full objective values.
void print_minimize_table(std::ostream& os, const MinimizeOutcome& out);

/// CSV emission (header row, comma separated, '.' decimal, LF endings).
void write_psa_csv(const std::string& path, const PsaOutcome& out);
void write_minimize_csv(const std::string& path, const MinimizeOutcome& out);

std::string status_string(PsaStatus s);
std::string status_string(MinimizeStatus s);

}  // namespace qpsa::report
