#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "dwol/esta.hpp"
#include "dwol/harness/config.hpp"

namespace dwol::harness {

// Creates the directory if needed and opens dir/name for writing.
std::ofstream open_output(const std::string& dir, const std::string& name);

// "# dwol <version>" and "# config <resolved JSON>" lines.
void write_header(std::ostream& os, const Json& resolved);

// Same provenance embedded as JSON fields.
Json provenance(const Json& resolved);

Json coefficient_record(const Trajectory& traj, const HarmonicModel& h);
Json correction_report(const EstaCorrection& c, const HarmonicModel& h);

// Double-quoted CSV field with doubled inner quotes when needed.
std::string csv_field(const std::string& s);

void write_sweep_plot(const std::string& dir, const std::string& csv_name, const std::string& variable,
                      const std::string& unit);

}  // namespace dwol::harness
