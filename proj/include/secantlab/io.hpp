#ifndef SECANTLAB_IO_HPP
#define SECANTLAB_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "secantlab/hierarchy.hpp"

namespace secantlab::io {

using Json = nlohmann::json;

// Every parser takes `where`, a path-like label ("config.json:points[2]") that
// prefixes InputError messages.

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json to_json(const PeriodMatrix& pm);
PeriodMatrix period_matrix_from_json(const Json& j, const std::string& where);

Json point_to_json(const CVector& p);
ComplexPoint point_from_json(const Json& j, int expected_size, const std::string& where);

Json to_json(const ProjectivePoint& p);
ProjectivePoint projective_from_json(const Json& j, const std::string& where);

Json to_json(const SecantConfiguration& cfg);
SecantConfiguration secant_from_json(const Json& j, const PeriodMatrix& pm, const std::string& where);

Json to_json(const HierarchyState& state);
HierarchyState hierarchy_from_json(const Json& j, const PeriodMatrix& pm, const std::string& where);

Json to_json(const PremiseReport& report);

/// Comma-separated table with a header row; numbers use '.' and 17 significant digits.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_number(double x);

}  // namespace secantlab::io

#endif  // SECANTLAB_IO_HPP
