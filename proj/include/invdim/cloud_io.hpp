#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "invdim/geometry.hpp"

namespace invdim {

/// CSV: one point per row, header row of coordinate names (x, y, z, x3, ...).
void write_cloud_csv(const PointCloud& cloud, std::ostream& out);
PointCloud read_cloud_csv(std::istream& in, AmbientSpace ambient);

/// Binary layout: magic "IDIM", version byte 1, dimension byte, point count
/// as little-endian uint64, then count*dim little-endian IEEE doubles.
void write_cloud_binary(const PointCloud& cloud, std::ostream& out);
PointCloud read_cloud_binary(std::istream& in, std::optional<AmbientSpace> ambient = {});

std::string coordinate_name(int axis);

}  // namespace invdim
