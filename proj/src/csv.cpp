#include "pdl/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pdl::csv {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

void write_meta(std::ofstream& out, const std::map<std::string, std::string>& meta) {
    for (const auto& [key, value] : meta) out << "# meta: " << key << "=" << value << "\n";
}

}  // namespace

void write_table(const std::string& path,
                 const std::map<std::string, std::string>& meta,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot open " + path);
    write_meta(out, meta);
    for (std::size_t c = 0; c < columns.size(); ++c)
        out << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << format_double(row[c]) << (c + 1 < row.size() ? "," : "\n");
    }
    if (!out) throw std::runtime_error("csv: write failed for " + path);
}

void write_spectrum(const std::string& path,
                    const std::map<std::string, std::string>& meta,
                    const scattering::SpectrumResult& result) {
    std::map<std::string, std::string> full = meta;
    full.insert(result.metadata.begin(), result.metadata.end());
    std::vector<std::vector<double>> rows;
    for (const auto& p : result.points) {
        if (p.failed) continue;
        rows.push_back({p.omega, p.transmission, p.reflection, p.p2, p.p2_direct,
                        p.unitarity_defect});
    }
    write_table(path, full, {"omega", "T", "R", "P2", "P2_direct", "unitarity_defect"},
                rows);
}

void write_two_photon(const std::string& path,
                      const std::map<std::string, std::string>& meta,
                      const TwoPhotonAmplitude& amp) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot open " + path);
    write_meta(out, meta);
    out << "# meta: basis="
        << (amp.basis == TwoPhotonBasis::kPosition ? "position" : "right_moving_energy")
        << "\n";
    const double peak = amp.amplitude.cwiseAbs().maxCoeff();
    const double scale = peak > 0.0 ? 1.0 / (peak * peak) : 1.0;

    out << "axis";
    for (double a : amp.axis) out << "," << format_double(a);
    out << "\n";
    for (int i = 0; i < amp.amplitude.rows(); ++i) {
        out << format_double(amp.axis[i]);
        for (int j = 0; j < amp.amplitude.cols(); ++j)
            out << "," << format_double(std::norm(amp.amplitude(i, j)) * scale);
        out << "\n";
    }
    if (!out) throw std::runtime_error("csv: write failed for " + path);
}

TwoPhotonAmplitude read_two_photon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open " + path);
    TwoPhotonAmplitude amp;
    std::string line;
    std::vector<std::vector<double>> rows;
    bool has_axis = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            if (line.find("basis=right_moving_energy") != std::string::npos)
                amp.basis = TwoPhotonBasis::kRightMovingEnergy;
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        bool first = true;
        bool axis_row = false;
        while (std::getline(ss, cell, ',')) {
            if (first && cell == "axis") {
                axis_row = true;
                first = false;
                continue;
            }
            first = false;
            row.push_back(std::stod(cell));
        }
        if (axis_row) {
            amp.axis = row;
            has_axis = true;
        } else if (!row.empty()) {
            rows.push_back(std::vector<double>(row.begin() + 1, row.end()));
        }
    }
    if (!has_axis || rows.empty()) throw std::runtime_error("csv: malformed grid in " + path);
    amp.amplitude.resize(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            amp.amplitude(i, j) = std::sqrt(std::max(0.0, rows[i][j]));
    return amp;
}

}  // namespace pdl::csv
