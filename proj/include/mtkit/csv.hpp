#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mtkit/circle.hpp"

namespace mtk {

/// printf("%.17g"): round-trips every double exactly.
std::string fmt17(double x);

/// A small in-memory CSV table. Cells are kept as strings so that writing is
/// byte-deterministic.
class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  void add_row(std::vector<std::string> cells);
  /// Index of a named column; throws InvalidArgument when absent.
  int column(const std::string& name) const;
  std::vector<double> numeric_column(const std::string& name) const;

  void write(std::ostream& os) const;
  std::string str() const;
  void save(const std::string& path) const;
  static CsvTable parse(std::istream& is);
  static CsvTable load(const std::string& path);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Build a row from numbers and strings without boilerplate.
struct Cell {
  std::string text;
  Cell(double x) : text(fmt17(x)) {}
  Cell(int x) : text(std::to_string(x)) {}
  Cell(long x) : text(std::to_string(x)) {}
  Cell(long long x) : text(std::to_string(x)) {}
  Cell(unsigned long long x) : text(std::to_string(x)) {}
  Cell(const char* s) : text(s) {}
  Cell(std::string s) : text(std::move(s)) {}
};
std::vector<std::string> row(std::initializer_list<Cell> cells);

CsvTable grid_function_csv(const GridFunction& f);
GridFunction grid_function_from_csv(const CsvTable& t);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace mtk
