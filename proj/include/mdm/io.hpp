#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mdm/certify.hpp"
#include "mdm/dioph.hpp"
#include "mdm/fourier.hpp"
#include "mdm/lattice.hpp"
#include "mdm/measure.hpp"

namespace mdm {

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// {"base": int, "dim": int, "digits": [[int,...],...], "weights": [float,...]}.
/// "dim" and "weights" are optional; 1D digits may be bare integers.
DigitMeasure parse_measure_json(const std::string& text);
DigitMeasure load_measure_file(const std::string& path);
std::string measure_to_json(const DigitMeasure& m);

/// Shortest decimal with 17 significant digits, '.' separator, no locale.
std::string format_double(double v);

/// "# mdm <version> <command> key=value ..." followed by a newline.
std::string header_comment(const std::string& command, const ConfigEcho& config);

void write_gcp_csv(std::ostream& os, const std::vector<ScanRow>& rows);
void write_partial_sums_csv(std::ostream& os, const std::vector<PartialSumRow>& rows);
void write_census_csv(std::ostream& os, const ResidueCensus& census);
void write_khinchine_csv(std::ostream& os, const std::vector<KhinchineRow>& rows);
void write_hits_csv(std::ostream& os, const std::vector<HitFraction>& rows);

std::string certificate_to_json(const DigitMeasure& m, const Certificate& cert,
                                const ConfigEcho& config);

}  // namespace mdm
