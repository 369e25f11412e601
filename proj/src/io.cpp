#include "genads/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace genads {

namespace {

double parse_double(const std::string& tok, const std::string& path,
                    size_t line_no) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw FormatError(path + ":" + std::to_string(line_no) +
                      ": not a number: '" + tok + "'");
  }
  while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos])))
    ++pos;
  if (pos != tok.size())
    throw FormatError(path + ":" + std::to_string(line_no) +
                      ": trailing junk in '" + tok + "'");
  return v;
}

}  // namespace

void write_points_csv(const std::string& path,
                      const std::vector<std::array<double, 2>>& points) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("write_points_csv: cannot open " + path);
  out << "x,y\n";
  char buf[80];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", p[0], p[1]);
    out << buf;
  }
}

std::vector<std::array<double, 2>> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open");
  std::vector<std::array<double, 2>> points;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line == "x,y") continue;  // header
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected 'x,y' row");
    const std::string a = line.substr(0, comma);
    const std::string b = line.substr(comma + 1);
    if (b.find(',') != std::string::npos)
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected exactly two columns");
    points.push_back(
        {parse_double(a, path, line_no), parse_double(b, path, line_no)});
  }
  if (points.empty()) throw FormatError(path + ": no data rows");
  return points;
}

void write_pgm(const std::string& path, const std::vector<double>& pixels,
               int side) {
  if (static_cast<int>(pixels.size()) != side * side)
    throw std::invalid_argument("write_pgm: pixel count mismatch");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
  out << "P5\n" << side << ' ' << side << "\n255\n";
  std::vector<unsigned char> raw(pixels.size());
  for (size_t i = 0; i < pixels.size(); ++i) {
    const double v = std::min(1.0, std::max(0.0, pixels[i]));
    raw[i] = static_cast<unsigned char>(std::lround(255.0 * v));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
}

std::vector<double> read_pgm(const std::string& path, int& side) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open");
  std::string magic;
  in >> magic;
  if (magic != "P5") throw FormatError(path + ": not a binary PGM (P5) file");
  int w = 0, h = 0, maxval = 0;
  in >> w >> h >> maxval;
  if (!in || w <= 0 || h <= 0 || w != h)
    throw FormatError(path + ": expected square PGM dimensions");
  if (maxval != 255) throw FormatError(path + ": expected maxval 255");
  in.get();  // single whitespace after header
  std::vector<unsigned char> raw(static_cast<size_t>(w) * h);
  if (!in.read(reinterpret_cast<char*>(raw.data()),
               static_cast<std::streamsize>(raw.size())))
    throw FormatError(path + ": truncated pixel payload");
  side = w;
  std::vector<double> pixels(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) pixels[i] = raw[i] / 255.0;
  return pixels;
}

std::vector<std::vector<double>> read_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open");
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ','))
      row.push_back(parse_double(tok, path, line_no));
    if (!rows.empty() && row.size() != rows.front().size())
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(path + ": no data rows");
  return rows;
}

}  // namespace genads
