#pragma once

// Deterministic CSV emission: comma separated, '.' decimals, '# '-prefixed
// header lines carrying the full parameter echo.

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "pdl/scattering.hpp"
#include "pdl/two_photon.hpp"

namespace pdl::csv {

std::string format_double(double v);

void write_table(const std::string& path,
                 const std::map<std::string, std::string>& meta,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows);

void write_spectrum(const std::string& path,
                    const std::map<std::string, std::string>& meta,
                    const scattering::SpectrumResult& result);

// Dense |amp|^2 grid with axis header rows, normalized to unit maximum.
void write_two_photon(const std::string& path,
                      const std::map<std::string, std::string>& meta,
                      const TwoPhotonAmplitude& amp);

TwoPhotonAmplitude read_two_photon(const std::string& path);

}  // namespace pdl::csv
