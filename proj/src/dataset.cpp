#include "conformal/dataset.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace conformal {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_cell(const std::string& raw, std::size_t row) {
  const std::string cell = trim(raw);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    throw std::invalid_argument("dataset row " + std::to_string(row) + ": bad numeric cell '" +
                                cell + "'");
  return value;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Dataset parse_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_csv_line(line);
  if (header.empty() || trim(header.back()) != "y")
    throw std::invalid_argument("dataset: header must end with column 'y'");
  const std::size_t p = header.size() - 1;
  for (std::size_t j = 0; j < p; ++j)
    if (trim(header[j]) != "x" + std::to_string(j + 1))
      throw std::invalid_argument("dataset: header feature columns must be named x1..xp");

  std::vector<LabeledPoint> points;
  std::optional<Eigen::VectorXd> prediction;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++row;
    if (prediction)
      throw std::invalid_argument("dataset: the feature-only prediction row must come last");
    auto cells = split_csv_line(line);
    const bool feature_only =
        cells.size() == p || (cells.size() == p + 1 && trim(cells.back()).empty());
    if (!feature_only && cells.size() != p + 1)
      throw std::invalid_argument("dataset row " + std::to_string(row) + ": expected " +
                                  std::to_string(p + 1) + " cells, got " +
                                  std::to_string(cells.size()));
    Eigen::VectorXd x(static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) x[static_cast<Eigen::Index>(j)] = parse_cell(cells[j], row);
    if (feature_only)
      prediction = std::move(x);
    else
      points.push_back({std::move(x), parse_cell(cells[p], row)});
  }
  if (points.empty()) throw std::invalid_argument("dataset: no labeled rows");
  return Dataset{make_sample(std::move(points)), std::move(prediction)};
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("dataset: cannot open '" + path + "'");
  return parse_dataset(in);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  const auto p = dataset.sample.feature_dim;
  for (Eigen::Index j = 0; j < p; ++j) out << "x" << (j + 1) << ",";
  out << "y\n";
  for (const auto& pt : dataset.sample.points) {
    for (Eigen::Index j = 0; j < p; ++j) out << format_value(pt.features[j]) << ",";
    out << format_value(pt.response) << "\n";
  }
  if (dataset.prediction_features) {
    const auto& x = *dataset.prediction_features;
    for (Eigen::Index j = 0; j < p; ++j) {
      out << format_value(x[j]);
      if (j + 1 < p) out << ",";
    }
    out << "\n";
  }
}

void write_dataset(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("dataset: cannot write '" + path + "'");
  write_dataset(out, dataset);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "' for hashing");
  std::ostringstream buf;
  buf << in.rdbuf();
  char hex[32];
  std::snprintf(hex, sizeof hex, "fnv1a-%016llx",
                static_cast<unsigned long long>(fnv1a(buf.str())));
  return hex;
}

}  // namespace conformal
