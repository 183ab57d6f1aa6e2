#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cwm/dataset.hpp"

namespace cwm {

/// CSV with a header row, kept as text. The unquoted token NA marks a
/// missing cell.
struct CsvTable {
  std::string context;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> cells;

  std::size_t rows() const noexcept { return cells.size(); }
  /// -1 when absent.
  int column_index(const std::string& name) const;
  /// Numeric column; NA cells are empty. ValidationError (with row and
  /// column) on anything else that is not a finite number.
  std::vector<std::optional<double>> numeric_column(int j) const;
};

/// `context` (usually the path) prefixes error messages. A row with the
/// wrong field count raises ValidationError.
CsvTable parse_csv(const std::string& text, const std::string& context);
CsvTable read_csv(const std::string& path);

/// Shortest round-trip form with up to 17 significant digits.
std::string format_double(double v);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& content);

/// Builds a dataset from named columns. An empty `inputs` list takes every
/// column except the response.
MissingDataset dataset_from_table(const CsvTable& table, const std::string& response,
                                  const std::vector<std::string>& inputs = {});

/// Header row of column_names, NA for masked responses.
std::string dataset_to_csv(const MissingDataset& data);

}  // namespace cwm
