#include "invdim/cloud_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "invdim/errors.hpp"

namespace invdim {

namespace {

void put_u64_le(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (unsigned char)((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64_le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

void put_f64_le(std::ostream& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64_le(out, bits);
}

double get_f64_le(std::istream& in) {
  const std::uint64_t bits = get_u64_le(in);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

std::string coordinate_name(int axis) {
  static const char* named[] = {"x", "y", "z"};
  if (axis < 3) return named[axis];
  return "x" + std::to_string(axis);
}

void write_cloud_csv(const PointCloud& cloud, std::ostream& out) {
  const int n = cloud.ambient.dim;
  for (int i = 0; i < n; ++i) out << (i ? "," : "") << coordinate_name(i);
  out << "\n";
  char buf[32];
  for (const auto& p : cloud.points) {
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", p[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
}

PointCloud read_cloud_csv(std::istream& in, AmbientSpace ambient) {
  PointCloud cloud;
  cloud.ambient = ambient;
  cloud.meta.method = "file-csv";
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("cloud_io: missing CSV header");
  int n = line.empty() ? 0 : 1;
  for (char c : line) n += c == ',';
  if (n != ambient.dim) throw InvalidInput("cloud_io: CSV column count != ambient dimension");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Point p = Vec::zeros(n);
    std::istringstream ls(line);
    std::string cell;
    for (int i = 0; i < n; ++i) {
      if (!std::getline(ls, cell, ',')) throw InvalidInput("cloud_io: short CSV row");
      p[i] = std::stod(cell);
    }
    cloud.points.push_back(p);
  }
  if (cloud.points.empty()) throw InvalidInput("cloud_io: CSV has no points");
  return cloud;
}

void write_cloud_binary(const PointCloud& cloud, std::ostream& out) {
  out.write("IDIM", 4);
  const unsigned char header[2] = {1, (unsigned char)cloud.ambient.dim};
  out.write(reinterpret_cast<const char*>(header), 2);
  put_u64_le(out, std::uint64_t(cloud.points.size()));
  for (const auto& p : cloud.points)
    for (int i = 0; i < cloud.ambient.dim; ++i) put_f64_le(out, p[i]);
}

PointCloud read_cloud_binary(std::istream& in, std::optional<AmbientSpace> ambient) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "IDIM", 4) != 0)
    throw InvalidInput("cloud_io: bad magic, not an IDIM cloud file");
  unsigned char header[2];
  in.read(reinterpret_cast<char*>(header), 2);
  if (!in || header[0] != 1)
    throw InvalidInput("cloud_io: unsupported version " + std::to_string(int(header[0])));
  const int n = int(header[1]);
  if (n < 1 || n > kMaxDim) throw InvalidInput("cloud_io: bad dimension byte");
  if (ambient && ambient->dim != n)
    throw InvalidInput("cloud_io: ambient dimension does not match file");
  const std::uint64_t count = get_u64_le(in);

  PointCloud cloud;
  cloud.ambient = ambient.value_or(AmbientSpace{SpaceKind::Euclidean, n});
  cloud.meta.method = "file-binary";
  cloud.points.reserve(size_t(count));
  for (std::uint64_t k = 0; k < count; ++k) {
    Point p = Vec::zeros(n);
    for (int i = 0; i < n; ++i) p[i] = get_f64_le(in);
    cloud.points.push_back(p);
  }
  if (!in) throw InvalidInput("cloud_io: truncated binary cloud file");
  return cloud;
}

}  // namespace invdim
