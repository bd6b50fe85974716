#pragma once

#include <string>
#include <variant>
#include <vector>

namespace dyndist {

/// Rectangular result table. Cells are either reals (rendered with 17
/// significant digits) or plain strings.
class ResultTable {
 public:
  using Cell = std::variant<double, std::string>;

  explicit ResultTable(std::vector<std::string> headers);

  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& headers() const { return headers_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  /// CSV: '.' decimal separator, ',' field separator, LF line endings,
  /// %.17g for reals.
  std::string to_csv() const;
  /// Aligned human-readable rendering.
  std::string to_text() const;

 private:
  std::vector<std::string> headers_;
  std::vector<std::vector<Cell>> rows_;
};

/// Formats one real the way CSV cells are written.
std::string format_real(double v);

/// Inverse of to_csv for round-trip checks; cells that parse fully as reals
/// become reals.
ResultTable parse_csv(const std::string& text);

}  // namespace dyndist
