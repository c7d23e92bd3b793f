#pragma once

#include <filesystem>
#include <string>

#include "climctl/simulate.hpp"

// Plain-text artifact export. All CSV files carry a header row; floating
// point values are serialized with max_digits10 so they round-trip exactly.

namespace climctl {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_double(double v);

// doc.csv: i,j,cost_to_go,chosen_u  (cost -1 = unreachable, chosen_u -1 = none)
void write_doc_csv(const std::filesystem::path& path, const DocTable& doc);
DocTable read_doc_csv(const std::filesystem::path& path, const CellGrid& grid,
                      const ControlSet& controls);

// controllable.csv: dense 0/1 matrix, one row per T_A index.
void write_controllable_csv(const std::filesystem::path& path, const ControllableRegion& r,
                            const CellGrid& grid);

// trajectory.csv: step,time_s,t_a,t_s,u
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& t);

// equilibrium.csv: t_a,t_s,eig_re_1,eig_re_2
void write_equilibrium_csv(const std::filesystem::path& path, const ClimateState& eq,
                           const std::array<double, 2>& eig);

std::string scenario_report_text(const ScenarioReport& rep);

}  // namespace climctl
