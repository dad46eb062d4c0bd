#include "mtkit/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mtk {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> row(std::initializer_list<Cell> cells) {
  std::vector<std::string> out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back(c.text);
  return out;
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw InvalidArgument("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                          std::to_string(header_.size()));
  rows_.push_back(std::move(cells));
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return static_cast<int>(i);
  throw InvalidArgument("CSV has no column '" + name + "'");
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
  const int c = column(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) {
    try {
      size_t used = 0;
      out.push_back(std::stod(r[c], &used));
      if (used != r[c].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InvalidArgument("CSV column '" + name + "' has non-numeric cell '" + r[c] + "'");
    }
  }
  return out;
}

namespace {

void write_line(std::ostream& os, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void CsvTable::write(std::ostream& os) const {
  write_line(os, header_);
  for (const auto& r : rows_) write_line(os, r);
}

std::string CsvTable::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

void CsvTable::save(const std::string& path) const { write_text_file(path, str()); }

CsvTable CsvTable::parse(std::istream& is) {
  std::string line;
  bool have_header = false;
  CsvTable t;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_header) {
      t.header_ = split(line);
      have_header = true;
    } else {
      t.add_row(split(line));
    }
  }
  if (!have_header) throw InvalidArgument("CSV input is empty");
  return t;
}

CsvTable CsvTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return parse(in);
}

CsvTable grid_function_csv(const GridFunction& f) {
  CsvTable t({"theta", "re", "im"});
  for (int j = 0; j < f.size(); ++j) t.add_row(row({f.grid().theta(j), f[j].real(), f[j].imag()}));
  return t;
}

GridFunction grid_function_from_csv(const CsvTable& t) {
  const auto theta = t.numeric_column("theta");
  const auto re = t.numeric_column("re");
  const auto im = t.numeric_column("im");
  const CircleGrid grid(static_cast<int>(re.size()));
  Eigen::VectorXcd v(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    if (std::abs(theta[j] - grid.theta(j)) > 1e-9)
      throw InvalidArgument("row " + std::to_string(j) + ": theta does not lie on the uniform grid");
    v[j] = {re[j], im[j]};
  }
  return GridFunction(grid, std::move(v));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mtk
