#pragma once

// CSV and JSON renderings of solver output. Numbers use 10 significant
// digits so tables are byte-stable across runs.

#include "fragsec/calibration.hpp"
#include "fragsec/equilibrium.hpp"
#include "fragsec/experiments.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace fragsec {

std::string format_number(double v);

extern const char* const kSweepCsvHeader;
extern const char* const kComparisonCsvHeader;

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

nlohmann::json to_json(const ModelParams& params);
nlohmann::json to_json(const StrategyProfile& profile);
nlohmann::json to_json(const EquilibriumPoint& point);
nlohmann::json to_json(const EquilibriumResult& result);
nlohmann::json to_json(const SweepRow& row);
nlohmann::json to_json(const ComparisonRow& row);
nlohmann::json to_json(const CalibratedConstants& constants);
nlohmann::json to_json(const StationarityResiduals& residuals);

} // namespace fragsec
