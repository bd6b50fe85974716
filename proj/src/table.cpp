#include "dyndist/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "dyndist/errors.hpp"

namespace dyndist {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  cells.push_back(current);
  return cells;
}

std::string cell_to_string(const ResultTable::Cell& cell) {
  if (const double* v = std::get_if<double>(&cell)) return format_real(*v);
  return std::get<std::string>(cell);
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ResultTable::ResultTable(std::vector<std::string> headers)
    : headers_(std::move(headers)) {
  if (headers_.empty()) throw ValidationError("table needs at least one column");
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != headers_.size())
    throw ValidationError("row arity does not match the header");
  rows_.push_back(std::move(row));
}

std::string ResultTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < headers_.size(); ++i) {
    if (i) out += ',';
    out += headers_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_to_string(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string ResultTable::to_text() const {
  std::vector<std::size_t> widths(headers_.size());
  std::vector<std::vector<std::string>> rendered;
  for (std::size_t i = 0; i < headers_.size(); ++i)
    widths[i] = headers_[i].size();
  for (const auto& row : rows_) {
    std::vector<std::string> cells;
    for (std::size_t i = 0; i < row.size(); ++i) {
      cells.push_back(cell_to_string(row[i]));
      widths[i] = std::max(widths[i], cells.back().size());
    }
    rendered.push_back(std::move(cells));
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << "  ";
      out << cells[i];
      for (std::size_t pad = cells[i].size(); pad < widths[i]; ++pad) out << ' ';
    }
    out << '\n';
  };
  emit(headers_);
  for (const auto& row : rendered) emit(row);
  return out.str();
}

ResultTable parse_csv(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) lines.push_back(current);
  if (lines.empty()) throw ParseError("empty CSV document", 0);

  ResultTable table(split_line(lines[0]));
  for (std::size_t k = 1; k < lines.size(); ++k) {
    std::vector<ResultTable::Cell> row;
    for (const std::string& cell : split_line(lines[k])) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (!cell.empty() && end == cell.c_str() + cell.size())
        row.emplace_back(v);
      else
        row.emplace_back(cell);
    }
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace dyndist
