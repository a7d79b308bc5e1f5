#include "maid/io/csv_dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace maid::io {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell.erase(0, cell.find_first_not_of(" \t\r"));
    cell.erase(cell.find_last_not_of(" \t\r") + 1);
    cells.push_back(cell);
  }
  return cells;
}

double parse_double(const std::string& s, std::size_t row) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("row " + std::to_string(row) + ": bad number '" + s + "'");
  }
}

}  // namespace

ClassificationData read_classification_csv(std::istream& in, int classes) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: missing header");
  const std::vector<std::string> header = split(line);
  const auto label_it = std::find(header.begin(), header.end(), "label");
  if (label_it == header.end()) throw std::runtime_error("CSV header has no 'label' column");
  const auto label_col = static_cast<std::size_t>(label_it - header.begin());
  const std::size_t features = header.size() - 1;
  if (features == 0) throw std::runtime_error("CSV has no feature columns");

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("row " + std::to_string(row_no) + ": expected " +
                               std::to_string(header.size()) + " columns");
    }
    std::vector<double> values;
    values.reserve(features);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_col) {
        const double label = parse_double(cells[c], row_no);
        if (label != static_cast<int>(label)) {
          throw std::runtime_error("row " + std::to_string(row_no) + ": label is not an integer");
        }
        labels.push_back(static_cast<int>(label));
      } else {
        values.push_back(parse_double(cells[c], row_no));
      }
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::runtime_error("CSV has no data rows");

  ClassificationData data;
  data.classes = classes > 0 ? classes : *std::max_element(labels.begin(), labels.end()) + 1;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] < 0 || labels[j] >= data.classes) {
      throw std::runtime_error("row " + std::to_string(j + 2) + ": label " +
                               std::to_string(labels[j]) + " out of range");
    }
  }
  data.labels = std::move(labels);
  data.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(features));
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t c = 0; c < features; ++c)
      data.features(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) = rows[j][c];
  return data;
}

ClassificationData read_classification_csv(const std::filesystem::path& path, int classes) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_classification_csv(in, classes);
}

}  // namespace maid::io
