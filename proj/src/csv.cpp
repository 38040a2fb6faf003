#include "adepinn/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "adepinn/error.hpp"

namespace adepinn {

std::string coordinate_header(int input_dim) {
  switch (input_dim) {
    case 2: return "x,t";
    case 3: return "x,y,t";
    case 4: return "x,y,z,t";
    default: throw Error(ErrorKind::invalid_config, "input dimension must be 2, 3 or 4");
  }
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

namespace {
std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}
}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_failure, "cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::io_failure, "empty CSV " + path);
  t.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty()) t.rows.push_back(split(line));
  }
  return t;
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorKind::io_failure, "not a number: " + text);
  }
  return v;
}

}  // namespace adepinn
