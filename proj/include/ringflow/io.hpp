#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ringflow/diagram.hpp"
#include "ringflow/simulate.hpp"

namespace ringflow {

/// 12 significant digits, C locale; the one formatter every artifact goes through.
std::string format_double(double v);

/// Write-temp-then-rename so partially written artifacts never appear.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// header: step,car,position,cumulative (car indices are 1-based)
std::string snapshots_csv(const Trajectory& t);

/// header: density,flow_closed_form,flow_simulated (last column may be empty)
std::string diagram_csv(const DiagramCurve& curve, std::span<const double> grid);
std::string sweep_csv(std::span<const SweepPoint> points);

/// header: occupancy,flow
std::vector<std::pair<double, double>> parse_measured_csv(const std::string& text);

}  // namespace ringflow
