#include "noisechaos/series.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "noisechaos/errors.hpp"
#include "noisechaos/spectra.hpp"

namespace noisechaos {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void DiagnosticSeries::validate() const {
  if (values.size() != times.size()) throw InvalidArgument(name + ": values/times length differ");
  if (stderrs && stderrs->size() != times.size()) {
    throw InvalidArgument(name + ": stderr/times length differ");
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0)) throw InvalidArgument(name + ": negative or NaN time");
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw InvalidArgument(name + ": times must be strictly increasing");
    }
  }
}

std::vector<double> make_time_grid(double t_min, double t_max, int n_points, GridSpacing spacing) {
  if (n_points < 1) throw InvalidArgument("n_points must be >= 1");
  if (!(t_min >= 0.0) || !std::isfinite(t_max)) throw InvalidArgument("bad grid bounds");
  if (n_points == 1) return {t_min};
  if (!(t_max > t_min)) throw InvalidArgument("t_max must exceed t_min");
  std::vector<double> grid(n_points);
  if (spacing == GridSpacing::Linear) {
    const double h = (t_max - t_min) / (n_points - 1);
    for (int k = 0; k < n_points; ++k) grid[k] = t_min + k * h;
  } else {
    if (!(t_min > 0.0)) throw InvalidArgument("log grid needs t_min > 0");
    const double a = std::log(t_min);
    const double h = (std::log(t_max) - a) / (n_points - 1);
    for (int k = 0; k < n_points; ++k) grid[k] = std::exp(a + k * h);
  }
  grid.front() = t_min;
  grid.back() = t_max;
  return grid;
}

std::string fnv1a_hex(const void* data, std::size_t size) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t k = 0; k < size; ++k) {
    h ^= p[k];
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fnv1a_hex(const std::string& s) { return fnv1a_hex(s.data(), s.size()); }

std::string spectrum_hash(const Spectrum& spec) {
  const VectorXd& e = spec.energies();
  return fnv1a_hex(e.data(), sizeof(double) * e.size());
}

std::string series_to_csv(const DiagnosticSeries& s, const std::string& comment) {
  s.validate();
  std::ostringstream os;
  if (!comment.empty()) os << "# " << comment << '\n';
  os << "t,re,im,stderr\n";
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    os << fmt_double(s.times[k]) << ',' << fmt_double(s.values[k].real()) << ','
       << fmt_double(s.values[k].imag()) << ',';
    if (s.stderrs) os << fmt_double((*s.stderrs)[k]);
    os << '\n';
  }
  return os.str();
}

nlohmann::json series_to_json(const DiagnosticSeries& s) {
  s.validate();
  nlohmann::json j;
  j["name"] = s.name;
  j["times"] = s.times;
  std::vector<double> re, im;
  for (const Complex& v : s.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["re"] = re;
  j["im"] = im;
  if (s.stderrs) j["stderr"] = *s.stderrs;
  j["metadata"] = {{"spectrum_hash", s.spectrum_hash}, {"noise", s.noise}, {"dim", s.dim}};
  if (s.seed) j["metadata"]["seed"] = *s.seed;
  if (!s.extra.empty()) j["metadata"]["extra"] = s.extra;
  return j;
}

DiagnosticSeries series_from_json(const nlohmann::json& j) {
  DiagnosticSeries s;
  try {
    s.name = j.at("name").get<std::string>();
    s.times = j.at("times").get<std::vector<double>>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != im.size()) throw InvalidArgument("re/im length differ");
    for (std::size_t k = 0; k < re.size(); ++k) s.values.emplace_back(re[k], im[k]);
    if (j.contains("stderr")) s.stderrs = j.at("stderr").get<std::vector<double>>();
    const auto& m = j.at("metadata");
    s.spectrum_hash = m.at("spectrum_hash").get<std::string>();
    s.noise = m.at("noise").get<std::string>();
    s.dim = m.at("dim").get<int>();
    if (m.contains("seed")) s.seed = m.at("seed").get<std::uint64_t>();
    if (m.contains("extra")) s.extra = m.at("extra");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed series JSON: ") + e.what());
  }
  s.validate();
  return s;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw Error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace noisechaos
