#include "bpreg/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bpreg {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("csv: bad " + what + " value '" + s + "'");
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("csv: cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw ConfigError("csv: '" + path + "' has no data");
  return lines;
}

struct PathRows {
  TimeGrid grid;
  std::vector<Vec> betas;
  std::vector<std::vector<double>> extras;  // columns past the betas
};

PathRows read_path_csv(const std::string& path, int n_extra) {
  const auto lines = read_lines(path);
  const auto header = split_csv_line(lines[0]);
  const int j = static_cast<int>(header.size()) - 1 - n_extra;
  if (j < 1 || header[0] != "t")
    throw ConfigError("csv: '" + path + "' has an unexpected header");
  std::vector<double> ts;
  std::vector<Vec> betas;
  std::vector<std::vector<double>> extras;
  for (size_t li = 1; li < lines.size(); ++li) {
    const auto f = split_csv_line(lines[li]);
    if (static_cast<int>(f.size()) != 1 + j + n_extra)
      throw ConfigError("csv: '" + path + "' row has wrong field count");
    ts.push_back(parse_double(f[0], "t"));
    Vec b(j);
    for (int k = 0; k < j; ++k) b(k) = parse_double(f[1 + static_cast<size_t>(k)], "beta");
    betas.push_back(std::move(b));
    std::vector<double> ex;
    for (int e = 0; e < n_extra; ++e)
      ex.push_back(parse_double(f[1 + static_cast<size_t>(j + e)], "diagnostic"));
    extras.push_back(std::move(ex));
  }
  return PathRows{TimeGrid(std::move(ts)), std::move(betas), std::move(extras)};
}

}  // namespace

Panel read_panel_csv(const std::string& path) {
  const auto lines = read_lines(path);
  const auto header = split_csv_line(lines[0]);
  if (header.size() < 4 || header[0] != "t" || header[1] != "i" || header[2] != "y")
    throw ConfigError("csv: '" + path + "' is not a panel file (want t,i,y,x_1,...)");
  const int j = static_cast<int>(header.size()) - 3;
  for (int k = 0; k < j; ++k)
    if (header[static_cast<size_t>(3 + k)] != "x_" + std::to_string(k + 1))
      throw ConfigError("csv: '" + path + "' covariate columns must be x_1..x_J");

  std::vector<PanelRow> rows;
  for (size_t li = 1; li < lines.size(); ++li) {
    const auto f = split_csv_line(lines[li]);
    if (static_cast<int>(f.size()) != 3 + j)
      throw ConfigError("csv: '" + path + "' row has wrong field count");
    PanelRow r;
    r.t = parse_double(f[0], "t");
    const double iv = parse_double(f[1], "i");
    r.case_index = static_cast<int>(iv);
    if (r.case_index != iv || r.case_index < 1)
      throw ConfigError("csv: case index must be a positive integer");
    r.y = parse_double(f[2], "y");
    for (int k = 0; k < j; ++k)
      r.x.push_back(parse_double(f[static_cast<size_t>(3 + k)], "x"));
    rows.push_back(std::move(r));
  }
  return validate_panel(rows);
}

void write_panel_csv(const std::string& path, const Panel& panel,
                     const std::vector<std::string>& header_comments) {
  std::ofstream out(path);
  if (!out) throw ConfigError("csv: cannot write '" + path + "'");
  for (const auto& c : header_comments) out << "# " << c << "\n";
  out << "t,i,y";
  for (int k = 1; k <= panel.n_covariates(); ++k) out << ",x_" << k;
  out << "\n";
  for (int t = 0; t < panel.n_times(); ++t)
    for (int i = 0; i < panel.n_cases(); ++i) {
      out << format_double(panel.grid()[t]) << ',' << (i + 1) << ','
          << format_double(panel.y(t)(i));
      for (int k = 0; k < panel.n_covariates(); ++k)
        out << ',' << format_double(panel.x(t)(i, k));
      out << "\n";
    }
}

void write_betas_csv(const std::string& path, const CoefPath& fit) {
  std::ofstream out(path);
  if (!out) throw ConfigError("csv: cannot write '" + path + "'");
  const int j = static_cast<int>(fit.betas.front().size());
  out << "t";
  for (int k = 1; k <= j; ++k) out << ",beta_" << k;
  out << ",max_foc_residual,converged\n";
  for (int t = 0; t < fit.grid.size(); ++t) {
    const auto& d = fit.diagnostics[static_cast<size_t>(t)];
    out << format_double(fit.grid[t]);
    for (int k = 0; k < j; ++k) out << ',' << format_double(fit.betas[static_cast<size_t>(t)](k));
    out << ',' << format_double(d.foc_residual_norm) << ',' << (d.converged ? 1 : 0)
        << "\n";
  }
}

CoefPath read_betas_csv(const std::string& path) {
  auto rows = read_path_csv(path, 2);
  std::vector<PointDiagnostics> diag;
  for (const auto& ex : rows.extras) {
    PointDiagnostics d;
    d.foc_residual_norm = ex[0];
    d.converged = ex[1] != 0.0;
    diag.push_back(std::move(d));
  }
  return CoefPath(std::move(rows.grid), std::move(rows.betas), std::move(diag));
}

void write_truth_csv(const std::string& path, const CoefPath& truth,
                     const std::vector<std::string>& header_comments) {
  std::ofstream out(path);
  if (!out) throw ConfigError("csv: cannot write '" + path + "'");
  for (const auto& c : header_comments) out << "# " << c << "\n";
  const int j = static_cast<int>(truth.betas.front().size());
  out << "t";
  for (int k = 1; k <= j; ++k) out << ",beta_" << k;
  out << "\n";
  for (int t = 0; t < truth.grid.size(); ++t) {
    out << format_double(truth.grid[t]);
    for (int k = 0; k < j; ++k)
      out << ',' << format_double(truth.betas[static_cast<size_t>(t)](k));
    out << "\n";
  }
}

CoefPath read_truth_csv(const std::string& path) {
  auto rows = read_path_csv(path, 0);
  return CoefPath::plain(std::move(rows.grid), std::move(rows.betas));
}

}  // namespace bpreg
