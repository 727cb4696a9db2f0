#include "ringflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ringflow {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string snapshots_csv(const Trajectory& t) {
    std::string out = "step,car,position,cumulative\n";
    const double m = static_cast<double>(t.ring.m);
    for (const auto& [step, state] : t.snapshots) {
        const auto positions = ring_positions(state, m);
        for (std::size_t car = 0; car < state.size(); ++car) {
            out += std::to_string(step);
            out += ',';
            out += std::to_string(car + 1);
            out += ',';
            out += format_double(positions[car]);
            out += ',';
            out += format_double(state[car]);
            out += '\n';
        }
    }
    return out;
}

std::string diagram_csv(const DiagramCurve& curve, std::span<const double> grid) {
    std::string out = "density,flow_closed_form,flow_simulated\n";
    for (double d : grid) {
        out += format_double(d);
        out += ',';
        out += format_double(curve.evaluate(d));
        out += ",\n";
    }
    return out;
}

std::string sweep_csv(std::span<const SweepPoint> points) {
    std::string out = "density,flow_closed_form,flow_simulated\n";
    for (const SweepPoint& pt : points) {
        out += format_double(pt.density);
        out += ',';
        out += format_double(pt.flow_closed_form);
        out += ',';
        out += format_double(pt.flow_simulated);
        out += '\n';
    }
    return out;
}

std::vector<std::pair<double, double>> parse_measured_csv(const std::string& text) {
    std::vector<std::pair<double, double>> points;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("occupancy", 0) == 0) continue;  // header
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("measured csv: line " + std::to_string(lineno) +
                                     ": expected occupancy,flow");
        try {
            points.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw std::runtime_error("measured csv: line " + std::to_string(lineno) +
                                     ": not a number");
        }
    }
    if (points.empty()) throw std::runtime_error("measured csv: no data rows");
    return points;
}

}  // namespace ringflow
