#pragma once

// CSV telemetry and run summaries (flat key=value text and JSON).

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pathfollow/sim.hpp"

namespace pathfollow {

/// Column names in CSV order, one per scalar SimRecord field.
const std::vector<std::string>& csv_columns();

/// Comment line with units, header row, then one row per record. Numbers use
/// the shortest round-trip form so logs are reproducible bit for bit.
void write_csv(std::ostream& os, std::span<const SimRecord> records);

/// Ordered key/value pairs shared by the text and JSON summaries.
std::vector<std::pair<std::string, std::string>> summary_fields(const ScenarioConfig& cfg,
                                                                const SimResult& r);

void write_summary_text(std::ostream& os, const ScenarioConfig& cfg, const SimResult& r);
void write_summary_json(std::ostream& os, const ScenarioConfig& cfg, const SimResult& r);

/// Printable feasibility block used by `check` and by summaries.
void write_feasibility(std::ostream& os, const FeasibilityReport& f);

/// Writes log.csv, summary.txt and summary.json into dir (created if needed).
void write_run(const std::filesystem::path& dir, const ScenarioConfig& cfg, const SimResult& r);

std::string format_double(double v);

}  // namespace pathfollow
