#pragma once

#include <string>
#include <vector>

namespace adepinn {

/// "x,t", "x,y,t" or "x,y,z,t" for k = 2, 3, 4 input coordinates.
std::string coordinate_header(int input_dim);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  ///< -1 when absent
};

/// Plain comma-separated reader (no quoting); throws IoFailure.
CsvTable read_csv(const std::string& path);

double parse_double(const std::string& text);

}  // namespace adepinn
