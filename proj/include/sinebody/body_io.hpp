#pragma once

#include "sinebody/bodies.hpp"

#include <string>

namespace sinebody {

/// Parses a body descriptor from JSON text:
///   {"dim": 3, "kind": "ball", "radius": 1}
///   {"kind": "ellipsoid", "semiaxes": [1, 1, 2]}
///   {"kind": "box", "half_widths": [1, 1]}
///   {"dim": 3, "kind": "cylinders", "cylinders": [{"axis": [1,0,0], "radius": 1}, ...]}
///   {"dim": 2, "kind": "radial_table", "nodes": [[1,0], ...], "values": [1, ...]}
/// Cylinder axes and table nodes are normalized on load. Syntax errors and
/// invariant violations raise DescriptorError naming the line or field.
BodyDescriptor parse_body_json(const std::string& text);

BodyDescriptor load_body_file(const std::string& path);

std::string body_to_json(const BodyDescriptor& descriptor);

}  // namespace sinebody
