#include "cwm/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "cwm/errors.hpp"

namespace cwm {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      out.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  out.push_back(trim(cell));
  return out;
}

}  // namespace

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == name) return static_cast<int>(j);
  }
  return -1;
}

std::vector<std::optional<double>> CsvTable::numeric_column(int j) const {
  if (j < 0 || j >= static_cast<int>(header.size())) throw ValidationError(context + ": column index out of range");
  std::vector<std::optional<double>> out;
  out.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string& cell = cells[i][static_cast<std::size_t>(j)];
    if (cell == "NA") {
      out.emplace_back();
      continue;
    }
    double v = 0.0;
    const char* first = cell.data();
    if (!cell.empty() && cell.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
      throw ValidationError(context + ": row " + std::to_string(i + 1) + ", column '" + header[static_cast<std::size_t>(j)] +
                            "': cannot parse '" + cell + "'");
    }
    out.emplace_back(v);
  }
  return out;
}

CsvTable parse_csv(const std::string& text, const std::string& context) {
  CsvTable table;
  table.context = context;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ValidationError(context + ": line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " fields, expected " + std::to_string(table.header.size()));
    }
    table.cells.push_back(std::move(cells));
  }
  if (!have_header) throw ValidationError(context + ": empty file");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  return parse_csv(buf.str(), path);
}

std::string format_double(double v) {
  char buf[64];
  // shortest representation that reads back exactly
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("error writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

MissingDataset dataset_from_table(const CsvTable& table, const std::string& response,
                                  const std::vector<std::string>& inputs) {
  const int iy = table.column_index(response);
  if (iy < 0) throw ValidationError("response column '" + response + "' not found");
  std::vector<int> cols;
  std::vector<std::string> names;
  if (inputs.empty()) {
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      if (static_cast<int>(j) != iy) {
        cols.push_back(static_cast<int>(j));
        names.push_back(table.header[j]);
      }
    }
  } else {
    for (const auto& name : inputs) {
      const int j = table.column_index(name);
      if (j < 0) throw ValidationError("input column '" + name + "' not found");
      if (j == iy) throw ValidationError("column '" + name + "' is the response");
      cols.push_back(j);
      names.push_back(name);
    }
  }
  MissingDataset data;
  const auto n = static_cast<Eigen::Index>(table.rows());
  data.X.resize(n, static_cast<Eigen::Index>(cols.size()));
  data.y.resize(n);
  data.mask.assign(static_cast<std::size_t>(n), false);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const auto col = table.numeric_column(cols[k]);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& cell = col[static_cast<std::size_t>(i)];
      if (!cell) {
        throw ValidationError(table.context + ": row " + std::to_string(i + 1) + ", column '" + names[k] +
                              "': covariates must be fully observed");
      }
      data.X(i, static_cast<Eigen::Index>(k)) = *cell;
    }
  }
  const auto ycol = table.numeric_column(iy);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& y = ycol[static_cast<std::size_t>(i)];
    data.mask[static_cast<std::size_t>(i)] = !y.has_value();
    data.y[i] = y ? *y : std::numeric_limits<double>::quiet_NaN();
  }
  names.push_back(response);
  data.column_names = std::move(names);
  data.validate();
  return data;
}

std::string dataset_to_csv(const MissingDataset& data) {
  std::string out;
  for (int j = 0; j < data.p(); ++j) {
    if (j) out += ',';
    out += data.column_names.empty() ? (j < data.d() ? "x" + std::to_string(j + 1) : std::string("y"))
                                     : data.column_names[static_cast<std::size_t>(j)];
  }
  out += '\n';
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.d(); ++j) {
      out += format_double(data.X(i, j));
      out += ',';
    }
    out += data.mask[static_cast<std::size_t>(i)] ? std::string("NA") : format_double(data.y[i]);
    out += '\n';
  }
  return out;
}

}  // namespace cwm
