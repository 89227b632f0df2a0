#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "noisechaos/types.hpp"

namespace noisechaos {

class Spectrum;

/// Observable sampled on a time grid.
struct DiagnosticSeries {
  std::string name;
  std::vector<double> times;
  std::vector<Complex> values;
  std::optional<std::vector<double>> stderrs;  ///< Monte Carlo only

  std::string spectrum_hash;
  std::string noise;  ///< short descriptor, e.g. "gue const J=1"
  int dim = 0;
  std::optional<std::uint64_t> seed;
  nlohmann::json extra = nlohmann::json::object();

  /// Throws InvalidArgument unless times are strictly increasing and the
  /// value/stderr lengths match.
  void validate() const;
};

/// Strictly increasing grid of n points on [t_min, t_max]. Log spacing needs t_min > 0.
enum class GridSpacing { Linear, Log };
std::vector<double> make_time_grid(double t_min, double t_max, int n_points, GridSpacing spacing);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const void* data, std::size_t size);
std::string fnv1a_hex(const std::string& s);
std::string spectrum_hash(const Spectrum& spec);

/// CSV with an optional leading "# key=value" comment line followed by the
/// header "t,re,im,stderr". Doubles are written with 17 significant digits.
std::string series_to_csv(const DiagnosticSeries& s, const std::string& comment = {});
nlohmann::json series_to_json(const DiagnosticSeries& s);
DiagnosticSeries series_from_json(const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace noisechaos
