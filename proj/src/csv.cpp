#include "pureg/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "pureg/errors.hpp"
#include "pureg/fs_util.hpp"

namespace pureg {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    std::string_view cell(line.data() + start,
                          (comma == std::string::npos ? line.size() : comma) - start);
    cells.emplace_back(trim(cell));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool try_parse_double(const std::string& cell, double& out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && !cell.empty();
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

CsvTable load_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);

  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_number = 0;
  Eigen::Index n_cols = -1;
  bool first_content_line = true;

  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    std::vector<std::string> cells = split_cells(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    std::size_t bad_cell = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!try_parse_double(cells[i], row[i])) {
        numeric = false;
        bad_cell = i;
        break;
      }
    }

    if (!numeric) {
      if (first_content_line) {
        table.had_header = true;
        table.header = std::move(cells);
        n_cols = static_cast<Eigen::Index>(table.header.size());
        first_content_line = false;
        continue;
      }
      throw DataError(path + ": line " + std::to_string(line_number) +
                      ": non-numeric value '" + cells[bad_cell] + "'");
    }

    if (n_cols < 0) {
      n_cols = static_cast<Eigen::Index>(row.size());
    } else if (static_cast<Eigen::Index>(row.size()) != n_cols) {
      throw DataError(path + ": line " + std::to_string(line_number) + ": expected " +
                      std::to_string(n_cols) + " columns, got " +
                      std::to_string(row.size()));
    }
    first_content_line = false;
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw DataError(path + ": no data rows");
  table.values.resize(static_cast<Eigen::Index>(rows.size()), n_cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Eigen::Index c = 0; c < n_cols; ++c) {
      table.values(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
    }
  }
  return table;
}

PointCloud load_csv(const std::string& path) {
  CsvTable table = load_csv_table(path);
  if (table.values.cols() < 2) {
    throw DataError(path + ": need at least 2 columns (features then response)");
  }
  PointCloud cloud;
  cloud.points = table.values.leftCols(table.values.cols() - 1);
  cloud.responses = table.values.rightCols<1>();
  cloud.validate();
  return cloud;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& values) {
  std::ostringstream out;
  if (!header.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out << ',';
      out << header[i];
    }
    out << '\n';
  }
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c) out << ',';
      out << format_double(values(r, c));
    }
    out << '\n';
  }
  atomic_write_file(path, out.str());
}

}  // namespace pureg
