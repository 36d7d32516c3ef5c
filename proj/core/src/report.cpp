#include "lgk/harness.hpp"

#include "lgk/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace lgk {

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  return out;
}

}  // namespace

void write_csv(const ComparisonReport& report, std::ostream& os) {
  os << "N,t,functional_id,mean,stderr,pde_value,gap,gap_in_se\n";
  for (const ComparisonRow& r : report.rows) {
    os << r.N << ',' << format_double(r.t) << ',' << r.functional_id << ','
       << format_double(r.mean) << ',' << format_double(r.stderr_value) << ','
       << format_double(r.pde_value) << ',' << format_double(r.gap) << ','
       << format_double(r.gap_in_se) << '\n';
  }
  if (!os) fail(Errc::IoFailure, "CSV write failed");
}

ComparisonReport parse_csv(std::istream& is) {
  ComparisonReport report;
  std::string line;
  if (!std::getline(is, line) || line != "N,t,functional_id,mean,stderr,pde_value,gap,gap_in_se")
    fail(Errc::IoFailure, "missing or unexpected CSV header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = split(line, ',');
    if (f.size() != 8) fail(Errc::IoFailure, "CSV row with wrong field count");
    ComparisonRow r;
    r.N = std::stoi(f[0]);
    r.t = parse_double(f[1]);
    r.functional_id = std::stoi(f[2]);
    r.mean = parse_double(f[3]);
    r.stderr_value = parse_double(f[4]);
    r.pde_value = parse_double(f[5]);
    r.gap = parse_double(f[6]);
    r.gap_in_se = parse_double(f[7]);
    report.rows.push_back(r);
  }
  return report;
}

void write_manifest(const ComparisonReport& report, const ExperimentConfig& cfg,
                    std::ostream& os) {
  nlohmann::json j;
  j["version"] = version_string();
  j["seed"] = cfg.master_seed;
  j["a"] = cfg.a;
  j["T"] = cfg.horizon;
  j["N_list"] = cfg.n_list;
  j["replicas"] = cfg.replicas;
  j["tag"] = cfg.tag;
  j["snapshot_times"] = cfg.snapshot_times;
  j["pde_grid"] = cfg.pde_grid;
  j["species"] = cfg.vs.species_count();
  j["rows"] = report.rows.size();
  j["wall_seconds"] = report.wall_seconds;
  os << j.dump(2) << '\n';
  if (!os) fail(Errc::IoFailure, "manifest write failed");
}

void write_svg(const ComparisonReport& report, std::ostream& os) {
  const int width = 640, height = 400, margin = 50;
  std::map<int, std::map<int, double>> gap_by_fun;  // functional -> N -> gap
  for (const ComparisonRow& r : report.rows)
    if (std::isfinite(r.gap)) gap_by_fun[r.functional_id][r.N] = r.gap;

  std::vector<int> ns;
  double max_gap = 0.0;
  for (const auto& [fid, series] : gap_by_fun)
    for (const auto& [n, g] : series) {
      if (std::find(ns.begin(), ns.end(), n) == ns.end()) ns.push_back(n);
      max_gap = std::max(max_gap, g);
    }
  std::sort(ns.begin(), ns.end());
  if (max_gap <= 0.0) max_gap = 1.0;

  auto xpos = [&](int n) {
    auto it = std::find(ns.begin(), ns.end(), n);
    double frac = ns.size() > 1
                      ? static_cast<double>(it - ns.begin()) / (ns.size() - 1)
                      : 0.5;
    return margin + frac * (width - 2 * margin);
  };
  auto ypos = [&](double g) { return height - margin - g / max_gap * (height - 2 * margin); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
     << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
     << height - margin << "\" stroke=\"black\"/>\n";
  for (int n : ns)
    os << "<text x=\"" << xpos(n) << "\" y=\"" << height - margin + 20
       << "\" font-size=\"12\" text-anchor=\"middle\">" << n << "</text>\n";
  os << "<text x=\"" << margin - 8 << "\" y=\"" << margin
     << "\" font-size=\"12\" text-anchor=\"end\">" << format_double(max_gap) << "</text>\n";

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  int ci = 0;
  for (const auto& [fid, series] : gap_by_fun) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[ci % 5] << "\" stroke-width=\"2\" points=\"";
    for (const auto& [n, g] : series) os << xpos(n) << ',' << ypos(g) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 16 * ci
       << "\" font-size=\"12\" fill=\"" << colors[ci % 5] << "\">F" << fid << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
  if (!os) fail(Errc::IoFailure, "SVG write failed");
}

}  // namespace lgk
