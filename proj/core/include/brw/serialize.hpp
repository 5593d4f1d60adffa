#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "brw/analysis.hpp"
#include "brw/genealogy.hpp"
#include "brw/mean_dynamics.hpp"
#include "brw/simulation.hpp"
#include "brw/spectral.hpp"

namespace brw {

inline constexpr std::string_view kSchema = "brw-phase/1";

/// Decimal rendering with 15 significant digits ("%.15g"). Non-finite
/// values render as "null" in JSON contexts and "nan"/"inf" in CSV.
std::string format_number(double v);

/// Rounds v to the value its 15-significant-digit rendering parses to.
double round15(double v);

// JSON payloads. Every document carries "schema": "brw-phase/1".
std::string to_json(const CriticalPoint& cp);
std::string to_json(const MeanMatrix& m);
std::string to_json(const SurvivalEstimate& s);
std::string to_json(const Genealogy& g);
std::string to_json(const std::vector<PhaseRow>& rows);
std::string to_json(const AsymptoticReport& r);
std::string to_json(const CouplingReport& r, const CouplingConfig& config);

CriticalPoint critical_point_from_json(std::string_view text);
MeanMatrix mean_matrix_from_json(std::string_view text);
SurvivalEstimate survival_from_json(std::string_view text);
Genealogy genealogy_from_json(std::string_view text);
std::vector<PhaseRow> phase_rows_from_json(std::string_view text);
AsymptoticReport asymptotic_report_from_json(std::string_view text);
CouplingReport coupling_report_from_json(std::string_view text);

// CSV payloads: comma separated, header row, LF line endings.
std::string phase_csv(const std::vector<PhaseRow>& rows);
std::string mean_curve_csv(const MeanCurve& curve);
std::string asymptotic_csv(const AsymptoticReport& r);

/// Writes "time,site,count" rows.
class TrajectoryCsvWriter {
 public:
  explicit TrajectoryCsvWriter(std::ostream& out);
  void write(double time, Site site, Count count);
  void write(double time, const Configuration& config);

 private:
  std::ostream& out_;
};

}  // namespace brw
